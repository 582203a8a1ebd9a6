#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "hnflow/hn.hpp"
#include "hnflow/oracle.hpp"

namespace hnflow {

namespace {

std::string describe(const SplitBundle& b) {
  std::ostringstream os;
  os << "twists [";
  for (size_t i = 0; i < b.twists().size(); ++i)
    os << (i ? "," : "") << b.twists()[i];
  os << "]";
  return os.str();
}

std::string describe(const Flag& f) {
  std::ostringstream os;
  os << "flag";
  for (const SlopePoint& s : f.steps)
    os << " (" << s.rank << "," << s.degree << ")";
  return os.str();
}

std::string describe(const PairModel& p) {
  std::ostringstream os;
  os << describe(p.bundle) << " image {";
  for (size_t i = 0; i < p.image.size(); ++i)
    os << (i ? "," : "") << p.image[i] + 1;
  os << "} tau " << p.tau.str();
  return os.str();
}

// Eigenvalue step profile on [0, r]: runs of (width, value) with adjacent
// equal values merged. Two directions induce the same endomorphism exactly
// when their profiles agree.
std::vector<std::pair<int, Rat>> eigen_profile(const Flag& f,
                                               const std::vector<Rat>& dir) {
  std::vector<std::pair<int, Rat>> prof;
  const auto qd = quotient_data(f);
  for (size_t i = 0; i < qd.size(); ++i) {
    if (!prof.empty() && prof.back().second == dir[i])
      prof.back().first += qd[i].rank;
    else
      prof.emplace_back(qd[i].rank, dir[i]);
  }
  return prof;
}

bool multiset_union_matches(const std::vector<SplitBundle>& blocks,
                            const SplitBundle& b) {
  std::vector<int> all;
  for (const SplitBundle& blk : blocks)
    all.insert(all.end(), blk.twists().begin(), blk.twists().end());
  std::sort(all.begin(), all.end(), std::greater<int>());
  return all == b.twists();
}

// Representatives of image subsets up to twist-preserving permutations:
// for each multiset of picked twist values, the subset taking the first
// indices of every value.
std::vector<std::vector<int>> canonical_images(const SplitBundle& b) {
  const int r = b.rank();
  std::vector<std::pair<int, int>> runs;  // (start index, length) per value
  for (int i = 0; i < r;) {
    int j = i;
    while (j < r && b.twist(j) == b.twist(i)) ++j;
    runs.emplace_back(i, j - i);
    i = j;
  }
  std::vector<std::vector<int>> out;
  std::vector<int> take(runs.size(), 0);
  auto rec = [&](auto&& self, size_t pos) -> void {
    if (pos == runs.size()) {
      std::vector<int> img;
      for (size_t q = 0; q < runs.size(); ++q)
        for (int t = 0; t < take[q]; ++t) img.push_back(runs[q].first + t);
      if (!img.empty()) out.push_back(std::move(img));
      return;
    }
    for (int t = 0; t <= runs[pos].second; ++t) {
      take[pos] = t;
      self(self, pos + 1);
    }
  };
  rec(rec, 0);
  return out;
}

}  // namespace

CertReport certify_classical(const SweepConfig& cfg) {
  validate_config(cfg);
  CertReport rep;
  const auto bundles =
      enumerate_bundles(cfg.max_rank, cfg.twist_min, cfg.twist_max);
  const double tol = 5.0 * cfg.grid_resolution;

  struct GridInstance {
    size_t bundle;
    bool semistable;
    double closed;  // -sqrt(value_sq) for the HN flag; unused when semistable
  };
  std::vector<GridInstance> grid_pool;
  bool corrupted = false;

  for (size_t bi = 0; bi < bundles.size(); ++bi) {
    const SplitBundle& b = bundles[bi];
    ++rep.bundles;
    const Rat m = b.slope();
    const Flag hn = hn_filtration(b);
    Rat closed = lagrange_minimum(hn, m)->value_sq;
    const bool ss = is_semistable(b);
    if (cfg.negative_control && !ss && !corrupted) {
      closed += Rat(1);
      corrupted = true;
    }
    const auto flags = enumerate_flags(b, cfg.degree_slack);
    rep.flags += static_cast<long long>(flags.size());

    const auto violation = [&](const std::string& kind,
                               const std::string& detail) {
      rep.violations.push_back({kind, describe(b) + ": " + detail});
    };

    const auto dest = optimal_destabilizer(b);
    if (ss && dest)
      violation("destabilizer-on-semistable", "expected none");
    if (!ss && !dest)
      violation("missing-destabilizer", "expected a destabilizer");

    if (!ss && dest) {
      if (dest->norm_sq != closed)
        violation("closed-form-mismatch",
                  "destabilizer norm_sq " + dest->norm_sq.str() +
                      " != flag-wise maximum " + closed.str());
      if (dest->flag.steps != hn.steps)
        violation("closed-form-mismatch", "destabilizer flag is not the HN flag");

      // flag-wise maxima and uniqueness; the HN flag sits in the slack-0
      // window already, so bounding the whole slack window by the closed
      // form also settles slack stability of the argmax
      const auto hn_profile = eigen_profile(hn, dest->direction);
      Rat best_seen;
      bool any = false;
      for (const Flag& f : flags) {
        const auto lag = lagrange_minimum(f, m);
        if (!lag) continue;
        if (!any || lag->value_sq > best_seen) best_seen = lag->value_sq, any = true;
        if (lag->value_sq > closed) {
          violation("optimality",
                    describe(f) + " has value_sq " + lag->value_sq.str() +
                        " above the closed form " + closed.str());
        } else if (lag->value_sq == closed &&
                   eigen_profile(f, lag->direction) != hn_profile) {
          violation("uniqueness",
                    describe(f) +
                        " ties the closed form with a different direction profile");
        }
      }
      if (!any || best_seen != closed)
        violation("closed-form-mismatch",
                  "enumerated maximum does not equal the closed form");

      // limit object and flow decay
      const auto blocks = limit_object(b, *dest);
      for (size_t i = 0; i < blocks.size(); ++i) {
        if (!is_semistable(blocks[i]))
          violation("limit-object", "block " + std::to_string(i + 1) +
                                        " not semistable");
        if (i > 0 && !(blocks[i - 1].slope() > blocks[i].slope()))
          violation("limit-object", "block slopes not strictly decreasing");
      }
      if (!multiset_union_matches(blocks, b))
        violation("limit-object", "blocks do not partition the twists");
      const auto decay = flow_decay_exponents(*dest);
      for (size_t i = 0; i < decay.size(); ++i)
        for (size_t j = i + 1; j < decay.size(); ++j)
          if (decay[i][j].sign() >= 0)
            violation("flow-decay", "nonnegative upper-triangular exponent");
    }

    // exact stability criterion over the enumerated spectra
    {
      bool negative_found = false;
      bool nonnegative_violated = false;
      for (const Flag& f : flags) {
        for (const auto& eig : integer_spectra(f.size())) {
          ++rep.spectra;
          const Rat w = maximal_weight(b, {f, eig});
          if (w.sign() < 0) negative_found = true;
          if (ss && w.sign() < 0) nonnegative_violated = true;
        }
        if (const auto lag = lagrange_minimum(f, m)) {
          if (f.size() > 1) {
            ++rep.spectra;
            const Rat w = maximal_weight(b, {f, lag->direction});
            if (w.sign() < 0) negative_found = true;
            if (ss && w.sign() < 0) nonnegative_violated = true;
          }
        }
      }
      if (ss && nonnegative_violated)
        violation("criterion", "semistable bundle has a negative weight");
      if (!ss && !negative_found)
        violation("criterion", "no negative weight found for a non-semistable bundle");
    }

    grid_pool.push_back({bi, ss, -std::sqrt(closed.to_double())});
  }

  // sampled grid agreement
  std::mt19937 rng(cfg.rng_seed);
  std::shuffle(grid_pool.begin(), grid_pool.end(), rng);
  if (static_cast<int>(grid_pool.size()) > cfg.grid_samples)
    grid_pool.resize(static_cast<size_t>(cfg.grid_samples));
  for (const GridInstance& gi : grid_pool) {
    const SplitBundle& b = bundles[gi.bundle];
    ++rep.grid_checks;
    if (gi.semistable) {
      const auto flags = enumerate_flags(b, cfg.degree_slack);
      std::uniform_int_distribution<size_t> pick(0, flags.size() - 1);
      const auto res =
          grid_minimize(b, flags[pick(rng)], b.slope(), cfg.grid_resolution);
      if (res.feasible && res.value < -1e-6)
        rep.violations.push_back(
            {"grid-semistable",
             describe(b) + ": grid minimum " + std::to_string(res.value)});
    } else {
      const auto res = grid_minimize(b, hn_filtration(b), b.slope(),
                                     cfg.grid_resolution);
      if (!res.feasible || std::abs(res.value - gi.closed) > tol)
        rep.violations.push_back(
            {"grid-agreement",
             describe(b) + ": grid " +
                 (res.feasible ? std::to_string(res.value) : "infeasible") +
                 " vs closed " + std::to_string(gi.closed)});
    }
  }
  return rep;
}

CertReport certify_pairs(const SweepConfig& cfg) {
  validate_config(cfg);
  CertReport rep;
  const auto bundles =
      enumerate_bundles(cfg.max_rank, cfg.twist_min, cfg.twist_max);
  const double tol = 5.0 * cfg.grid_resolution;

  struct GridInstance {
    PairModel pair;
    Flag flag;
    bool semistable;
    bool skip;
    int constraint_step;  // 0-based; -1 when unconstrained
    double closed;
  };
  std::vector<GridInstance> grid_pool;
  bool corrupted = false;

  for (const SplitBundle& b : bundles) {
    ++rep.bundles;
    std::vector<Flag> split_flags;
    Flag hn;
    if (b.rank() > 1) {
      split_flags = enumerate_split_flags(b);
      hn = hn_filtration(b);
    }
    for (const auto& image : canonical_images(b)) {
      for (const Rat& tau : cfg.tau_grid) {
        if (b.slope() < tau) continue;
        ++rep.instances;
        const PairModel p(b, image, tau);
        if (b.rank() == 1) {
          ++rep.skipped;  // no subobjects of intermediate rank; always stable
          continue;
        }
        const auto violation = [&](const std::string& kind,
                                   const std::string& detail) {
          rep.violations.push_back({kind, describe(p) + ": " + detail});
        };
        const bool ss = is_tau_semistable(p);
        auto dest = pair_optimal_destabilizer(p);
        if (ss && dest) violation("pair-destabilizer-on-semistable", "expected none");
        if (!ss && !dest) violation("pair-missing-destabilizer", "expected one");

        if (!ss && dest) {
          Rat closed = dest->norm_sq;
          if (cfg.negative_control && !corrupted) {
            closed += Rat(1);
            corrupted = true;
          }
          const GeneralizedHN g = generalized_hn(p);
          std::string why;
          const auto tag =
              check_pair_filtration_clauses(p, g.flag, g.m_index, &why, &hn);
          if (!tag)
            violation("theorem-clause", why);
          else if (*tag != g.case_tag)
            violation("theorem-clause", "case tag mismatch");

          // uniqueness by exhaustive filtering over witnessed split flags
          std::vector<std::pair<std::vector<SlopePoint>, int>> satisfying;
          for (const Flag& f : split_flags) {
            ++rep.flags;
            const auto qd = quotient_data(f);
            const int k = static_cast<int>(qd.size());
            for (int mm = 0; mm <= k; ++mm) {
              if (mm >= 1 && !(qd[static_cast<size_t>(mm - 1)].slope > tau))
                continue;
              if (mm + 1 <= k && !(tau >= qd[static_cast<size_t>(mm)].slope))
                continue;
              if (check_pair_filtration_clauses(p, f, mm, nullptr, &hn)) {
                const std::pair<std::vector<SlopePoint>, int> key{f.steps, mm};
                if (std::find(satisfying.begin(), satisfying.end(), key) ==
                    satisfying.end())
                  satisfying.push_back(key);
              }
            }
          }
          if (satisfying.size() != 1)
            violation("uniqueness", std::to_string(satisfying.size()) +
                                        " flags satisfy the theorem clauses");
          else if (satisfying[0].first != g.flag.steps ||
                   satisfying[0].second != g.m_index)
            violation("uniqueness",
                      "the unique satisfying flag differs from the construction");

          // containment: the top isotypic block sits inside every
          // image-containing subobject of minimal quotient slope
          if (Rat(b.twist(0)) > tau) {
            std::vector<int> top_block;
            for (int i = 0; i < b.rank() && b.twist(i) == b.twist(0); ++i)
              top_block.push_back(i);
            const int r = b.rank();
            bool found = false;
            Rat best;
            for (unsigned mask = 1; mask + 1 < (1u << r); ++mask) {
              std::vector<int> s;
              for (int i = 0; i < r; ++i)
                if (mask & (1u << i)) s.push_back(i);
              if (!subset_includes(s, p.image)) continue;
              const Rat q(b.degree() - b.subset_sum(s),
                          r - static_cast<int>(s.size()));
              if (!found || q < best) {
                found = true;
                best = q;
              }
            }
            if (found && best < tau) {
              for (unsigned mask = 1; mask + 1 < (1u << r); ++mask) {
                std::vector<int> s;
                for (int i = 0; i < r; ++i)
                  if (mask & (1u << i)) s.push_back(i);
                if (!subset_includes(s, p.image)) continue;
                if (Rat(b.degree() - b.subset_sum(s),
                        r - static_cast<int>(s.size())) != best)
                  continue;
                if (!subset_includes(s, top_block))
                  violation("containment-lemma",
                            "a minimal-quotient-slope subobject misses the top block");
              }
            }
          }

          // optimality among admissible filtrations
          const auto opt_profile = eigen_profile(dest->flag, dest->direction);
          Rat best_seen;
          bool any = false;
          for (const Flag& f : split_flags) {
            const auto cand = admissible_candidate(p, f);
            if (!cand) continue;
            if (!any || cand->value_sq > best_seen)
              best_seen = cand->value_sq, any = true;
            if (cand->value_sq > closed) {
              violation("pair-optimality",
                        describe(f) + " beats the closed form");
            } else if (cand->value_sq == closed &&
                       eigen_profile(f, cand->direction) != opt_profile) {
              violation("pair-uniqueness",
                        describe(f) + " ties the closed form with a different profile");
            }
          }
          if (!any || best_seen != closed)
            violation("closed-form-mismatch",
                      "admissible maximum does not equal the closed form");

          // the destabilizing direction really is a negative-weight spectrum
          {
            ++rep.spectra;
            const auto w = pair_maximal_weight(p, {dest->flag, dest->direction});
            if (!w.finite || !(w.value == -dest->norm_sq))
              violation("criterion", "destabilizer weight != -norm_sq");
          }

          // limit object: semistable blocks away from the skip slot, the
          // skipped block tau-semistable as a pair, twists preserved
          const auto lim = pair_limit_object(p, *dest);
          for (size_t i = 0; i < lim.blocks.size(); ++i) {
            const bool exempt =
                dest->skip && static_cast<int>(i) == dest->m_index;
            if (!exempt && !is_semistable(lim.blocks[i]))
              violation("pair-limit", "block " + std::to_string(i + 1) +
                                          " not semistable");
          }
          if (dest->skip) {
            if (!lim.phi_block || *lim.phi_block != dest->m_index)
              violation("pair-limit", "skip block not tagged");
            if (!is_tau_semistable(quotient_pair(p, dest->flag, dest->m_index)))
              violation("pair-limit", "tagged block pair not tau-semistable");
          } else {
            // no surviving morphism at level zero: the image sits in blocks
            // of strictly negative eigenvalue
            const int istep = image_step_of(dest->flag, p.image);
            if (istep > 0 &&
                dest->direction[static_cast<size_t>(istep - 1)].sign() >= 0)
              violation("pair-limit",
                        "image reaches a block of nonnegative eigenvalue");
          }
          if (!multiset_union_matches(lim.blocks, b))
            violation("pair-limit", "blocks do not partition the twists");

          grid_pool.push_back({p, dest->flag, false, dest->skip,
                               image_step_of(dest->flag, p.image) - 1,
                               -std::sqrt(closed.to_double())});
        }

        // exact criterion: every enumerated constrained spectrum of a
        // tau-semistable pair has nonnegative weight
        if (ss) {
          bool bad = false;
          for (const Flag& f : split_flags) {
            for (const auto& eig : integer_spectra(f.size())) {
              ++rep.spectra;
              const auto w = pair_maximal_weight(p, {f, eig});
              if (w.finite && w.value.sign() < 0) bad = true;
            }
            if (const auto cand = admissible_candidate(p, f)) {
              ++rep.spectra;
              const auto w = pair_maximal_weight(p, {f, cand->direction});
              if (w.finite && w.value.sign() < 0) bad = true;
            }
            if (bad) break;
          }
          if (bad)
            violation("criterion",
                      "tau-semistable pair has a negative constrained weight");
          if (!split_flags.empty())
            grid_pool.push_back({p, split_flags[0], true, false, -2, 0.0});
        }
      }
    }
  }

  // sampled constrained grid agreement
  std::mt19937 rng(cfg.rng_seed + 1);
  std::shuffle(grid_pool.begin(), grid_pool.end(), rng);
  if (static_cast<int>(grid_pool.size()) > cfg.grid_samples)
    grid_pool.erase(grid_pool.begin() + cfg.grid_samples, grid_pool.end());
  for (const GridInstance& gi : grid_pool) {
    ++rep.grid_checks;
    if (gi.semistable) {
      const auto flags = enumerate_split_flags(gi.pair.bundle);
      std::uniform_int_distribution<size_t> pick(0, flags.size() - 1);
      const Flag& f = flags[pick(rng)];
      std::optional<GridConstraint> constr;
      const int istep = image_step_of(f, gi.pair.image);
      if (istep > 0)
        constr = GridConstraint{istep - 1, GridConstraint::Mode::kNonPositive};
      const auto res = grid_minimize(gi.pair.bundle, f, gi.pair.tau,
                                     cfg.grid_resolution, constr);
      if (res.feasible && res.value < -1e-6)
        rep.violations.push_back(
            {"grid-semistable", describe(gi.pair) + ": grid minimum " +
                                    std::to_string(res.value)});
    } else {
      double got = 0.0;
      bool have = false;
      if (gi.constraint_step >= 0) {
        const auto res = grid_minimize(
            gi.pair.bundle, gi.flag, gi.pair.tau, cfg.grid_resolution,
            GridConstraint{gi.constraint_step,
                           GridConstraint::Mode::kNonPositive});
        if (res.feasible) got = res.value, have = true;
      } else {
        const auto res = grid_minimize(gi.pair.bundle, gi.flag, gi.pair.tau,
                                       cfg.grid_resolution);
        if (res.feasible) got = res.value, have = true;
      }
      if (gi.skip) {
        const auto res = grid_minimize(
            gi.pair.bundle, gi.flag, gi.pair.tau, cfg.grid_resolution,
            GridConstraint{gi.constraint_step, GridConstraint::Mode::kZero});
        if (res.feasible && (!have || res.value < got))
          got = res.value, have = true;
      }
      if (!have || std::abs(got - gi.closed) > tol)
        rep.violations.push_back(
            {"grid-agreement",
             describe(gi.pair) + ": grid " +
                 (have ? std::to_string(got) : "infeasible") + " vs closed " +
                 std::to_string(gi.closed)});
    }
  }
  return rep;
}

}  // namespace hnflow
