#pragma once

#include "taillab/tail_kernel.hpp"

#include <string>
#include <utility>
#include <vector>

namespace taillab {

struct IdentitySide {
  std::string label;
  Estimate est;
};

/// One compared pair of sides; when the sides share their sample stream the
/// accumulated per-draw difference drives the verdict (exact coverage for
/// any cross-correlation), otherwise the combined stderr does.
struct PairCheck {
  int a = 0;
  int b = 0;
  std::optional<Estimate> diff;
};

/// Result of one executable identity: named sides, the pairs the identity
/// equates, and the statistical verdict at `tol` stderrs.
struct IdentityReport {
  std::string name;
  std::vector<IdentitySide> sides;
  std::vector<PairCheck> pairs;
  double tol = 3.0;
  double max_sigmas = 0.0;
  bool pass = false;

  double pair_sigmas(const PairCheck& p) const;
  void finalize();
};

enum class ThetaMethod {
  ForwardDef,
  BackwardDef,
  InfargmaxProb,
  RatioSupToAlphaSum,
  ForwardDiff,
  HarmonicCount,
};

const char* theta_method_name(ThetaMethod m);

/// One of the six candidate-extremal-index expressions; all estimate the same
/// number.
Estimate theta_candidate(const SpectralModel& model, ThetaMethod method,
                         std::uint64_t n, unsigned lanes, std::uint64_t seed);

/// All six methods side by side (plus the exact value when the law admits
/// one), compared pairwise.
IdentityReport theta_candidate_hexagon(const SpectralModel& model, std::uint64_t n,
                                       unsigned lanes, std::uint64_t seed,
                                       double tol = 3.0);

/// theta E[H(Q)] = E[H(Theta) 1{I(Theta)=0}] (= E[H(Theta)/||Theta||_a^a] when
/// H is alpha-homogeneous).  H must be shift invariant.
IdentityReport check_Q_theta_identity(const Functional& h, const SpectralModel& model,
                                      std::uint64_t n, unsigned lanes,
                                      std::uint64_t seed, double tol = 3.0);

/// theta sum_j E[|Q_j|^alpha] = 1, plus the l1-moment identity
/// theta E[||Q||_1^alpha] = E[||Theta||_1^{alpha-1}] where the model admits a
/// variance-finite test of it.
IdentityReport qsum_alpha_identity(const SpectralModel& model, std::uint64_t n,
                                   unsigned lanes, std::uint64_t seed,
                                   double tol = 3.0);

/// theta E[H(Q)] = E[H(Theta_{0,inf}) - H(Theta_{1,inf})] for alpha-homogeneous
/// shift-invariant H evaluated on forward slices.
IdentityReport check_forward_identity(const Functional& h, const SpectralModel& model,
                                      std::uint64_t n, unsigned lanes,
                                      std::uint64_t seed, double tol = 3.0);

/// The two alpha = 1 log identities (location parameter of the 1-stable
/// limit); requires alpha = 1 and a nonnegative model.
IdentityReport log_identities_alpha1(const SpectralModel& model, std::uint64_t n,
                                     unsigned lanes, std::uint64_t seed,
                                     double tol = 3.0);

struct ClusterIndexPoint {
  int k = 0;
  Estimate b_k;
  Estimate diff;  // b_{k+1} - b_k
};

struct ClusterIndexCurve {
  std::vector<ClusterIndexPoint> points;
  Estimate limit;       // theta E[H_+^alpha(Q)]
  Estimate cesaro;      // b_{k_max} / k_max; carries an O(1/k) start-up bias
  Estimate tail_slope;  // (b_{k_max} - b_{burn}) / (k_max - burn)
  double sigmas = 0.0;  // tail slope against the Q-side limit
  bool pass = false;
};

/// Cluster indices b_k(H) for a 1-homogeneous shift-invariant H with declared
/// l1 Lipschitz bound, accumulated from the per-step telescoping identity,
/// with the k-slope checked against the Q-side limit.
ClusterIndexCurve cluster_index(const Functional& h_base, const SpectralModel& model,
                                int k_max, std::uint64_t n, unsigned lanes,
                                std::uint64_t seed, double tol = 3.0);

}  // namespace taillab
