#pragma once

#include <stdexcept>
#include <string>

namespace sperner {

/** Base class for every error raised by the library. */
class Error : public std::runtime_error
{
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/** Raised when a grid of dimension 0 is requested. */
class DegenerateDimension : public Error
{
  public:
    explicit DegenerateDimension(const std::string& what) : Error(what) {}
};

/** A point has a coordinate below -1e-9 or does not sum to one. */
class PointOutsideSimplex : public Error
{
  public:
    explicit PointOutsideSimplex(const std::string& what) : Error(what) {}
};

/** A map returned a value that is not a point of the simplex. */
class MapRangeViolation : public Error
{
  public:
    explicit MapRangeViolation(const std::string& what) : Error(what) {}
};

/** A labeling breaks the corner/face rules, so parity is not guaranteed. */
class NonconformingLabeling : public Error
{
  public:
    explicit NonconformingLabeling(const std::string& what) : Error(what) {}
};

/** Path following found no door on the boundary face. */
class NoBoundaryDoor : public Error
{
  public:
    explicit NoBoundaryDoor(const std::string& what) : Error(what) {}
};

/**
 * One of the residual-bound inequalities failed on a fully labeled cell.
 * The inequalities are theorems, so this always indicates a bug.
 */
class BoundViolated : public Error
{
  public:
    explicit BoundViolated(const std::string& what) : Error(what) {}
};

/** The PL-map parameter tau is not below every labeled coordinate. */
class TauTooLarge : public Error
{
  public:
    explicit TauTooLarge(const std::string& what) : Error(what) {}
};

/** Generic bad argument (malformed spec, bad config, bad file). */
class InvalidArgument : public Error
{
  public:
    explicit InvalidArgument(const std::string& what) : Error(what) {}
};

/** The refinement schedule ran out before reaching the residual target. */
class NotConverged : public Error
{
  public:
    explicit NotConverged(const std::string& what) : Error(what) {}
};

}  // namespace sperner
