// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace nearfield {

// Raised when a metric is evaluated outside the region where it is defined,
// e.g. a beamdepth beyond the near-field limit or an aperture below alpha*beta.
class DomainError : public std::domain_error
{
public:
  explicit DomainError(const std::string &what) : std::domain_error(what) {}
};

} // namespace nearfield
