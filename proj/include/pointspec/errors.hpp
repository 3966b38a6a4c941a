#pragma once

#include <stdexcept>

namespace pointspec {

/// Parameters outside the regime where the partial-fraction split of the
/// kernel symbol exists (4 eps^2 alpha >= 1, complex roots).
struct DecompositionDomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Free kernel requested at a point where it diverges (r = 0 in d = 2, 3).
struct SingularityError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Sampled eigenvalue branches violated the monotone-decrease guarantee,
/// which indicates a scan grid too coarse for the problem at hand.
struct BranchConsistencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace pointspec
