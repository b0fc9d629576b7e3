#pragma once

#include <string>

#include "bmw/core.hpp"

namespace bmw {

/// Raised by the coherent tensor product when two coherent corners map to
/// an incoherent pair.
class NotSignCoherent : public PreconditionError {
 public:
  NotSignCoherent(std::string first, std::string second);
  const std::string& first() const { return first_; }
  const std::string& second() const { return second_; }

 private:
  std::string first_, second_;
};

/// Adds a copy "a_bar" of every A-generator and the barred copy of every
/// square; the X-side is untouched. Degree (2M, N).
BmwPresentation double_presentation(const BmwPresentation& p);
/// Candidate finite-residual elements of the double.
std::string double_note(const BmwPresentation& p);

enum class TensorMode { Full, Coherent };

/// Full: generators are inversion classes of signed letter pairs of each
/// side, corner map κ×κ, degree (M², N²). Coherent: generators are pairs of
/// positive generators; throws NotSignCoherent when κ×κ leaves them.
BmwPresentation tensor_product(const BmwPresentation& p, TensorMode mode);

/// Degree (2m² + 4mm′ + m′², 2n² + 4nn′ + n′²) of the coherent product.
std::pair<int, int> coherent_tensor_degree(const Degree& d);

}  // namespace bmw
