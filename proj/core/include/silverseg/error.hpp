#ifndef SILVERSEG_ERROR_HPP
#define SILVERSEG_ERROR_HPP

#include <stdexcept>
#include <string>

namespace silverseg {

/// Domain error for every failure the toolkit can diagnose (bad headers,
/// grid mismatches, degenerate inputs, predictor failures). The CLI maps
/// these to exit code 1; usage errors are handled by the argument parser.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace silverseg

#endif
