#ifndef HILBERT_ERRORS_HPP
#define HILBERT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hilbert {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PointNotInterior : Error {
    explicit PointNotInterior(const std::string& what = "point is not strictly interior")
        : Error(what) {}
};

struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& what = "dimension mismatch")
        : Error(what) {}
};

struct NonpositiveFactor : Error {
    explicit NonpositiveFactor(const std::string& what = "scale factor must be positive")
        : Error(what) {}
};

struct DegenerateBody : Error {
    explicit DegenerateBody(const std::string& what = "body has (near) zero volume")
        : Error(what) {}
};

struct WidthOutOfRange : Error {
    explicit WidthOutOfRange(const std::string& what = "cap width out of range")
        : Error(what) {}
};

struct DegenerateInput : Error {
    explicit DegenerateInput(const std::string& what = "input does not affinely span the requested dimension")
        : Error(what) {}
};

struct PickerPointNotInFace : Error {
    explicit PickerPointNotInFace(const std::string& what = "picker returned a point outside its face")
        : Error(what) {}
};

struct BudgetTooSmall : Error {
    explicit BudgetTooSmall(const std::string& what = "quadrature budget below minimum")
        : Error(what) {}
};

struct InvalidSpec : Error {
    explicit InvalidSpec(const std::string& what = "invalid region specification")
        : Error(what) {}
};

struct NonPolytopeBody : Error {
    explicit NonPolytopeBody(const std::string& what = "operation requires a polytopal body")
        : Error(what) {}
};

struct EpsilonTooSmall : Error {
    explicit EpsilonTooSmall(const std::string& what = "epsilon too small for the vertex budget")
        : Error(what) {}
};

struct CoincidentPoints : Error {
    explicit CoincidentPoints(const std::string& what = "points coincide")
        : Error(what) {}
};

struct BadConfig : Error {
    explicit BadConfig(const std::string& what = "bad configuration")
        : Error(what) {}
};

} // namespace hilbert

#endif
