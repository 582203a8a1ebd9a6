#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hnflow/model.hpp"
#include "hnflow/pairs.hpp"
#include "hnflow/weight.hpp"

namespace hnflow {

// Brute-force ground truth for the closed forms: flag enumeration,
// constrained grid minimization on the eigenvalue ellipsoid, and sweep
// certification. Nothing in here consults the closed-form solutions except
// to compare against them.

struct SweepConfig {
  int max_rank = 4;
  int twist_min = -2;
  int twist_max = 2;
  std::vector<Rat> tau_grid;   // pair sweeps only
  int degree_slack = 2;
  double grid_resolution = 1e-3;
  int grid_samples = 200;
  unsigned rng_seed = 1729;
  bool negative_control = false;  // corrupt one closed form; the sweep must
                                  // then report a violation
};

// Throws std::invalid_argument when the config violates its invariants
// (max_rank >= 1, twist_min <= twist_max, 0 < grid_resolution <= 1e-2,
// degree_slack >= 0).
void validate_config(const SweepConfig& cfg);

// All split bundles with the given rank bound and twists in
// [twist_min, twist_max], one per sorted twist multiset.
std::vector<SplitBundle> enumerate_bundles(int max_rank, int twist_min,
                                           int twist_max);

// Every flag with strictly increasing ranks whose step degrees lie in
// [topsum(k) - slack, topsum(k)] (the final step is pinned to the full
// bundle). Flags realizable by nested index subsets carry canonical
// witnesses. Deduplicated at the (rank, degree) level by construction.
std::vector<Flag> enumerate_flags(const SplitBundle& b, int slack);

// Every witnessed split flag: one per chain of nested index subsets ending
// at the full index set.
std::vector<Flag> enumerate_split_flags(const SplitBundle& b);

// Number of chains in the subset lattice of an n-element set (the expected
// size of enumerate_split_flags for a rank-n bundle).
unsigned long long count_subset_chains(int n);

// Canonical lex-least nested witness chain realizing the steps, when one
// exists.
std::optional<std::vector<std::vector<int>>> find_witness_chain(
    const SplitBundle& b, const std::vector<SlopePoint>& steps);

// Strictly increasing integer eigenvalue tuples with entries in [-3, 3]:
// the exact spectra driven through the stability criterion checks.
std::vector<std::vector<Rat>> integer_spectra(int k);

struct GridConstraint {
  int step = 0;  // 0-based flag step the constraint applies to
  enum class Mode { kNonPositive, kZero } mode = Mode::kNonPositive;
};

struct GridResult {
  bool feasible = false;
  double value = 0.0;
  std::vector<double> argmin;
};

// Minimizes sum lambda_i r_i (m_i - baseline) over the ellipsoid
// sum r_i lambda_i^2 = 1 intersected with increasing eigenvalues (and the
// step constraint when supplied), by spherical sampling plus
// coordinate-descent refinement in the angles; `resolution` is the final
// angular step. Reports infeasible when the constraint empties the set
// (a single-step flag pinned to zero).
GridResult grid_minimize(const SplitBundle& b, const Flag& f,
                         const Rat& baseline, double resolution,
                         std::optional<GridConstraint> constraint = {});

// Every clause of the generalized filtration theorem checked against a
// candidate witnessed flag and proposed index m; returns the case tag on
// success and fills `why` on failure. `classical_hn` may pass a precomputed
// classical filtration of p.bundle.
std::optional<PairCase> check_pair_filtration_clauses(
    const PairModel& p, const Flag& flag, int m, std::string* why = nullptr,
    const Flag* classical_hn = nullptr);

// Filtrations admissible for the pair minimization problem: the slope chain
// with a tau gap at l, the image inside step l+1, and the skip rule (the
// eigenvalue of step l+1 pinned to zero when the image is not in step l).
// At most one l per flag qualifies.
struct AdmissibleCandidate {
  int l = 0;
  bool skip = false;
  std::vector<Rat> direction;
  Rat value_sq;
};
std::optional<AdmissibleCandidate> admissible_candidate(const PairModel& p,
                                                        const Flag& flag);

struct Violation {
  std::string kind;
  std::string detail;
};

struct CertReport {
  std::vector<Violation> violations;
  long long bundles = 0;
  long long instances = 0;
  long long flags = 0;
  long long spectra = 0;
  long long grid_checks = 0;
  long long skipped = 0;
  bool ok() const { return violations.empty(); }
};

// Sweeps every bundle in the config box: flag-wise Lagrange maxima attained
// uniquely at the Harder-Narasimhan flag, grid agreement with the closed
// form on sampled instances, the exact stability criterion, and the limit
// object checks.
CertReport certify_classical(const SweepConfig& cfg);

// Sweeps every (bundle, image, tau) with slope >= tau: theorem clauses and
// uniqueness of the generalized filtration, the admissible-flag optimality
// of the pair destabilizer, the exact pair criterion, and constrained grid
// agreement on sampled instances.
CertReport certify_pairs(const SweepConfig& cfg);

}  // namespace hnflow
