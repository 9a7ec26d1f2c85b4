#pragma once

#include <stdexcept>
#include <string>

namespace apermute {

enum class Errc {
  invalid_argument,
  empty_class,
  oracle_limit,
  identity_violation,
  io,
};

/// Library failure. The code maps onto the CLI exit status.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace apermute
