#pragma once

#include <stdexcept>
#include <string>

namespace isrsgn {

// Invalid user input: bad config values, out-of-range parameters.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Request outside a model's validity region (e.g. linear Raman-gain band).
class model_domain_error : public std::runtime_error {
 public:
  explicit model_domain_error(const std::string& what) : std::runtime_error(what) {}
};

// Solver / quadrature failure; message carries diagnostics.
class numerics_error : public std::runtime_error {
 public:
  explicit numerics_error(const std::string& what) : std::runtime_error(what) {}
};

// Problem size exceeds a configured budget.
class resource_error : public std::runtime_error {
 public:
  explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace isrsgn
