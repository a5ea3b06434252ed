#ifndef DESIGNSWITCH_ERROR_HPP
#define DESIGNSWITCH_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace dsw {

enum class errc {
  invalid_argument,
  parse_error,
  index_out_of_range,
  not_uniform,
  not_balanced,
  degenerate_k,
  not_switching_set,
  odd_size,
  stale_switching_set,
  budget_exceeded,
  overlapping_sets,
  not_symmetric,
  not_prime,
  not_hadamard,
  not_regular,
  wrong_row_sum,
  order_mismatch,
  not_bush_structured,
  orbit_splits_classes,
};

constexpr std::string_view to_string(errc e) noexcept {
  switch (e) {
    case errc::invalid_argument: return "InvalidArgument";
    case errc::parse_error: return "ParseError";
    case errc::index_out_of_range: return "IndexOutOfRange";
    case errc::not_uniform: return "NotUniform";
    case errc::not_balanced: return "NotBalanced";
    case errc::degenerate_k: return "DegenerateK";
    case errc::not_switching_set: return "NotSwitchingSet";
    case errc::odd_size: return "OddSize";
    case errc::stale_switching_set: return "StaleSwitchingSet";
    case errc::budget_exceeded: return "BudgetExceeded";
    case errc::overlapping_sets: return "OverlappingSets";
    case errc::not_symmetric: return "NotSymmetric";
    case errc::not_prime: return "NotPrime";
    case errc::not_hadamard: return "NotHadamard";
    case errc::not_regular: return "NotRegular";
    case errc::wrong_row_sum: return "WrongRowSum";
    case errc::order_mismatch: return "OrderMismatch";
    case errc::not_bush_structured: return "NotBushStructured";
    case errc::orbit_splits_classes: return "OrbitSplitsClasses";
  }
  return "Unknown";
}

/// Every domain failure in the library is reported through this exception.
/// `code()` identifies the failure class; `what()` carries the details
/// (offending indices, counts) prefixed by the class name.
class design_error : public std::runtime_error {
 public:
  design_error(errc code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

}  // namespace dsw

#endif
