#pragma once

// Random and exhaustive generation of models and formulas, and the sweep
// that runs the tensor path against the set-theoretic oracle.

#include <algorithm>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"

#include "tenlog/dsl.hpp"
#include "tenlog/evaluator.hpp"
#include "tenlog/formula.hpp"
#include "tenlog/model.hpp"

namespace tenlog {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of instance `index` in a run seeded with `seed`; independent of how
/// instances are distributed over workers.
inline std::uint64_t instance_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ index);
}

/// Uniform integer in [0, n). Plain modulo keeps the stream portable across
/// standard libraries; the bias is negligible for the small n used here.
inline std::size_t draw(Rng& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }
inline bool coin(Rng& rng) { return (rng() >> 63) != 0; }

// ---------------------------------------------------------------------------
// Random models

struct ModelGenConfig {
  std::size_t max_domain = 3;
  std::size_t min_predicates = 1;
  std::size_t max_predicates = 3;
  std::size_t max_relations = 2;
  std::size_t max_arity = 3;
};

/// |D| uniform in [1, max_domain]; every atom (or tuple) is in each
/// extension independently with probability 1/2.
inline Model random_model(Rng& rng, const ModelGenConfig& cfg) {
  const std::size_t n = 1 + draw(rng, cfg.max_domain);
  std::vector<std::string> atoms;
  for (std::size_t i = 0; i < n; ++i) atoms.push_back("a" + std::to_string(i));

  std::vector<PredicateDecl> preds;
  const std::size_t np = cfg.min_predicates + draw(rng, cfg.max_predicates - cfg.min_predicates + 1);
  for (std::size_t k = 0; k < np; ++k) {
    PredicateDecl p{"p" + std::to_string(k), {}};
    for (std::size_t i = 0; i < n; ++i) {
      if (coin(rng)) p.extension.insert(i);
    }
    preds.push_back(std::move(p));
  }

  std::vector<RelationDecl> rels;
  const std::size_t nr = draw(rng, cfg.max_relations + 1);
  for (std::size_t k = 0; k < nr; ++k) {
    RelationDecl r{"r" + std::to_string(k), 1 + draw(rng, cfg.max_arity), {}};
    Tuple t(r.arity, 0);
    std::size_t cells = 1;
    for (std::size_t a = 0; a < r.arity; ++a) cells *= n;
    for (std::size_t c = 0; c < cells; ++c) {
      std::size_t rem = c;
      for (std::size_t a = r.arity; a-- > 0;) {
        t[a] = rem % n;
        rem /= n;
      }
      if (coin(rng)) r.extension.insert(t);
    }
    rels.push_back(std::move(r));
  }
  return Model(std::move(atoms), std::move(preds), std::move(rels));
}

// ---------------------------------------------------------------------------
// Random formulas

namespace detail {

inline std::string random_atom(Rng& rng, const Model& m) {
  return m.atoms()[draw(rng, m.domain_size())].name;
}

inline SetExprPtr random_set_leaf(Rng& rng, const Model& m) {
  const std::size_t np = m.predicates().size();
  const std::size_t nr = m.relations().size();
  const std::size_t pick = draw(rng, np + nr);
  if (pick < np) return set_pred(m.predicates()[pick].name);
  const RelationDecl& r = m.relations()[pick - np];
  std::vector<std::string> prefix;
  for (std::size_t k = 0; k + 1 < r.arity; ++k) prefix.push_back(random_atom(rng, m));
  return set_partial(r.name, std::move(prefix));
}

inline SetExprPtr random_set(Rng& rng, const Model& m, std::size_t depth) {
  if (depth <= 1 || draw(rng, 3) == 0) return random_set_leaf(rng, m);
  SetExprPtr a = random_set(rng, m, depth - 1);
  SetExprPtr b = random_set(rng, m, depth - 1);
  return coin(rng) ? set_and(std::move(a), std::move(b)) : set_or(std::move(a), std::move(b));
}

inline FormulaPtr random_leaf(Rng& rng, const Model& m) {
  const std::size_t np = m.predicates().size();
  const std::size_t nr = m.relations().size();
  // One slot in eight is a truth constant, and always one when the
  // signature is empty.
  if (np + nr == 0 || draw(rng, 8) == 0) return constant(TruthVec::of(coin(rng)));
  const std::size_t pick = draw(rng, np + nr);
  if (pick < np) return atom(m.predicates()[pick].name, random_atom(rng, m));
  const RelationDecl& r = m.relations()[pick - np];
  std::vector<std::string> args;
  for (std::size_t k = 0; k < r.arity; ++k) args.push_back(random_atom(rng, m));
  return rel_atom(r.name, std::move(args));
}

inline FormulaPtr random_connective_formula(Rng& rng, const Model& m, std::size_t depth) {
  if (depth <= 1 || draw(rng, 4) == 0) return random_leaf(rng, m);
  switch (draw(rng, 4)) {
    case 0: return negate(random_connective_formula(rng, m, depth - 1));
    case 1: return conj(random_connective_formula(rng, m, depth - 1), random_connective_formula(rng, m, depth - 1));
    case 2: return disj(random_connective_formula(rng, m, depth - 1), random_connective_formula(rng, m, depth - 1));
    default:
      return implies(random_connective_formula(rng, m, depth - 1),
                     random_connective_formula(rng, m, depth - 1));
  }
}

}  // namespace detail

/// Random formula of depth at most `max_depth` over the model's signature.
/// Roughly one in five formulas is quantified (when the model has anything
/// to quantify over and depth allows a set expression below the root).
inline FormulaPtr random_formula(Rng& rng, const Model& m, std::size_t max_depth) {
  const bool can_quantify =
      max_depth >= 2 && m.predicates().size() + m.relations().size() > 0;
  if (can_quantify && draw(rng, 5) == 0) {
    if (coin(rng)) {
      SetExprPtr a = detail::random_set(rng, m, max_depth - 1);
      return for_all(std::move(a), detail::random_set(rng, m, max_depth - 1));
    }
    return there_exists(detail::random_set(rng, m, max_depth - 1));
  }
  return detail::random_connective_formula(rng, m, max_depth);
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration

/// Every connective formula of depth <= max_depth over the given leaves.
inline std::vector<FormulaPtr> enumerate_formulas(const std::vector<FormulaPtr>& leaves,
                                                  std::size_t max_depth) {
  if (max_depth == 0) return {};
  std::vector<FormulaPtr> all = leaves;  // depth <= d, grown level by level
  std::vector<FormulaPtr> last = leaves;  // depth exactly d
  for (std::size_t d = 2; d <= max_depth; ++d) {
    std::vector<FormulaPtr> level;
    for (const auto& f : last) level.push_back(negate(f));
    // Binary nodes whose deeper child has depth exactly d-1.
    const std::size_t lower = all.size() - last.size();
    for (Connective op : {Connective::kAnd, Connective::kOr, Connective::kImplies}) {
      for (std::size_t i = 0; i < all.size(); ++i) {
        for (std::size_t j = 0; j < all.size(); ++j) {
          if (i < lower && j < lower) continue;
          level.push_back(binary(op, all[i], all[j]));
        }
      }
    }
    all.insert(all.end(), level.begin(), level.end());
    last = std::move(level);
  }
  return all;
}

/// Every set expression of depth <= max_depth over the given leaves.
inline std::vector<SetExprPtr> enumerate_sets(const std::vector<SetExprPtr>& leaves,
                                              std::size_t max_depth) {
  if (max_depth == 0) return {};
  std::vector<SetExprPtr> all = leaves;
  std::size_t last_size = leaves.size();
  for (std::size_t d = 2; d <= max_depth; ++d) {
    std::vector<SetExprPtr> level;
    const std::size_t lower = all.size() - last_size;
    for (int u = 0; u < 2; ++u) {
      for (std::size_t i = 0; i < all.size(); ++i) {
        for (std::size_t j = 0; j < all.size(); ++j) {
          if (i < lower && j < lower) continue;
          level.push_back(u ? set_or(all[i], all[j]) : set_and(all[i], all[j]));
        }
      }
    }
    last_size = level.size();
    all.insert(all.end(), level.begin(), level.end());
  }
  return all;
}

/// All ground atomic formulas of a model, plus T and F.
inline std::vector<FormulaPtr> ground_leaves(const Model& m) {
  std::vector<FormulaPtr> out{constant(truth_top()), constant(truth_bot())};
  for (const auto& p : m.predicates()) {
    for (const auto& a : m.atoms()) out.push_back(atom(p.name, a.name));
  }
  for (const auto& r : m.relations()) {
    std::size_t cells = 1;
    for (std::size_t k = 0; k < r.arity; ++k) cells *= m.domain_size();
    for (std::size_t c = 0; c < cells; ++c) {
      std::vector<std::string> args(r.arity);
      std::size_t rem = c;
      for (std::size_t k = r.arity; k-- > 0;) {
        args[k] = m.atoms()[rem % m.domain_size()].name;
        rem /= m.domain_size();
      }
      out.push_back(rel_atom(r.name, std::move(args)));
    }
  }
  return out;
}

/// All predicate names and all one-slot partial relations of a model.
inline std::vector<SetExprPtr> set_leaves(const Model& m) {
  std::vector<SetExprPtr> out;
  for (const auto& p : m.predicates()) out.push_back(set_pred(p.name));
  for (const auto& r : m.relations()) {
    std::size_t cells = 1;
    for (std::size_t k = 0; k + 1 < r.arity; ++k) cells *= m.domain_size();
    for (std::size_t c = 0; c < cells; ++c) {
      std::vector<std::string> prefix(r.arity - 1);
      std::size_t rem = c;
      for (std::size_t k = prefix.size(); k-- > 0;) {
        prefix[k] = m.atoms()[rem % m.domain_size()].name;
        rem /= m.domain_size();
      }
      out.push_back(set_partial(r.name, std::move(prefix)));
    }
  }
  return out;
}

/// Signature used by the exhaustive sweep: predicates p, q and a binary
/// relation r.
inline std::size_t exhaustive_model_count(std::size_t n) {
  const std::size_t bits = 2 * n + n * n;
  return std::size_t{1} << bits;
}

/// Model number `code` among all extension combinations over |D| = n.
inline Model exhaustive_model(std::size_t n, std::size_t code) {
  std::vector<std::string> atoms;
  for (std::size_t i = 0; i < n; ++i) atoms.push_back("a" + std::to_string(i));
  PredicateDecl p{"p", {}}, q{"q", {}};
  RelationDecl r{"r", 2, {}};
  std::size_t bit = 0;
  for (std::size_t i = 0; i < n; ++i, ++bit) {
    if (code >> bit & 1) p.extension.insert(i);
  }
  for (std::size_t i = 0; i < n; ++i, ++bit) {
    if (code >> bit & 1) q.extension.insert(i);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j, ++bit) {
      if (code >> bit & 1) r.extension.insert({i, j});
    }
  }
  return Model(std::move(atoms), {std::move(p), std::move(q)}, {std::move(r)});
}

/// Every model of the exhaustive signature with 1 <= |D| <= max_domain, or a
/// seeded sample of `cap` of them. Smaller domains are taken whole first;
/// the largest domain that does not fit is sampled without replacement.
inline std::vector<Model> exhaustive_models(std::size_t max_domain, std::size_t cap,
                                            std::uint64_t seed) {
  std::vector<Model> out;
  Rng rng(splitmix64(seed));
  for (std::size_t n = 1; n <= max_domain && out.size() < cap; ++n) {
    const std::size_t total = exhaustive_model_count(n);
    const std::size_t budget = cap - out.size();
    if (total <= budget) {
      for (std::size_t c = 0; c < total; ++c) out.push_back(exhaustive_model(n, c));
      continue;
    }
    std::vector<std::size_t> codes(total);
    std::iota(codes.begin(), codes.end(), std::size_t{0});
    for (std::size_t k = 0; k < budget; ++k) {
      std::swap(codes[k], codes[k + draw(rng, total - k)]);
    }
    codes.resize(budget);
    std::sort(codes.begin(), codes.end());
    for (std::size_t c : codes) out.push_back(exhaustive_model(n, c));
  }
  return out;
}

/// The formulas checked per model in exhaustive mode:
///  - every connective formula of depth <= min(2, max_depth) over all
///    ground atoms and T/F;
///  - every connective formula of depth <= max_depth over a two-leaf
///    alphabet that rotates with `rotation`, so the ground atoms are
///    covered across models;
///  - every exists over set expressions of depth <= 2 and every forall
///    over pairs of set leaves.
inline std::vector<FormulaPtr> exhaustive_formulas(const Model& m, std::size_t max_depth,
                                                   std::size_t rotation) {
  const std::vector<FormulaPtr> ground = ground_leaves(m);
  std::vector<FormulaPtr> out = enumerate_formulas(ground, std::min<std::size_t>(2, max_depth));
  if (max_depth >= 3) {
    // Skip T/F (slots 0, 1) for the rotating pair unless nothing else exists.
    const std::size_t atoms = ground.size() - 2;
    std::vector<FormulaPtr> pair;
    if (atoms == 0) {
      pair = {ground[0], ground[1]};
    } else {
      pair = {ground[2 + rotation % atoms], ground[2 + (rotation * 7 + 3) % atoms]};
    }
    for (auto& f : enumerate_formulas(pair, max_depth)) {
      if (depth(*f) > 2) out.push_back(std::move(f));
    }
  }
  if (max_depth >= 2) {
    const std::vector<SetExprPtr> leaves = set_leaves(m);
    for (const auto& s : enumerate_sets(leaves, std::min<std::size_t>(2, max_depth - 1))) {
      out.push_back(there_exists(s));
    }
    for (const auto& a : leaves) {
      for (const auto& b : leaves) out.push_back(for_all(a, b));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sweep

struct SweepConfig {
  std::size_t max_domain = 3;
  std::size_t max_depth = 3;
  std::uint64_t seed = 0;
  /// Random instances to generate (ignored in exhaustive mode).
  std::size_t count = 100;
  /// Enumerate models and formulas instead of sampling them.
  bool exhaustive = false;
  /// Upper bound on models visited in exhaustive mode.
  std::size_t model_cap = 5000;
  /// 0 picks the hardware concurrency.
  std::size_t workers = 0;
  std::size_t element_cap = kDefaultElementCap;
  /// Where to write re-runnable model/formula files for disagreements.
  std::optional<std::filesystem::path> artifact_dir;
};

struct SweepRecord {
  std::uint64_t seed = 0;
  std::size_t index = 0;
  OracleVerdict verdict;
  /// Set when evaluation threw; the instance counts as a disagreement.
  std::string error;
  /// Filled for disagreements only.
  std::string model_text;
  std::string plan_text;
};

struct SweepReport {
  SweepConfig config;
  std::size_t instances = 0;
  std::size_t models = 0;
  std::size_t disagreements = 0;
  /// Random mode: one record per instance. Exhaustive mode: disagreements only.
  std::vector<SweepRecord> records;

  bool ok() const { return disagreements == 0; }
};

inline std::string truth_label(const TruthVec& v) {
  if (v == truth_top()) return "T";
  if (v == truth_bot()) return "F";
  return "[" + format_number(v.t()) + ", " + format_number(v.f()) + "]";
}

inline nlohmann::json to_json(const SweepRecord& r) {
  nlohmann::json j;
  j["seed"] = r.seed;
  j["index"] = r.index;
  j["formula"] = r.verdict.formula;
  j["tensor"] = r.error.empty() ? truth_label(r.verdict.tensor_result) : "error";
  j["oracle"] = r.verdict.oracle_result ? "T" : "F";
  j["agree"] = r.verdict.agree && r.error.empty();
  if (!r.error.empty()) j["error"] = r.error;
  if (!r.model_text.empty()) j["model"] = r.model_text;
  return j;
}

/// One JSON object per line per record, then a summary line.
inline std::string to_records(const SweepReport& report) {
  std::string out;
  for (const auto& r : report.records) out += to_json(r).dump() + '\n';
  nlohmann::json summary;
  summary["summary"] = true;
  summary["seed"] = report.config.seed;
  summary["mode"] = report.config.exhaustive ? "exhaustive" : "random";
  summary["models"] = report.models;
  summary["instances"] = report.instances;
  summary["disagreements"] = report.disagreements;
  out += summary.dump() + '\n';
  return out;
}

namespace detail {

inline SweepRecord run_instance(const Formula& f, const Model& m, std::uint64_t seed,
                                std::size_t index, const CompileOptions& opts) {
  SweepRecord rec;
  rec.seed = seed;
  rec.index = index;
  try {
    rec.verdict = check(f, m, opts);
  } catch (const std::exception& e) {
    rec.verdict.formula = print_formula(f);
    rec.error = e.what();
  }
  if (!rec.verdict.agree || !rec.error.empty()) {
    rec.verdict.agree = false;
    rec.model_text = print_model(m);
    try {
      rec.plan_text = compile(f, m, opts).to_string();
    } catch (const std::exception& e) {
      rec.plan_text = std::string("# compile failed: ") + e.what() + '\n';
    }
  }
  return rec;
}

inline void write_artifact(const std::filesystem::path& dir, const SweepRecord& r) {
  std::filesystem::create_directories(dir);
  const std::string stem = "disagreement-" + std::to_string(r.index);
  std::ofstream(dir / (stem + ".model")) << r.model_text;
  std::ofstream(dir / (stem + ".formula")) << r.verdict.formula << '\n';
  std::ofstream(dir / (stem + ".plan")) << r.plan_text;
}

/// Runs job(i) for i in [0, n) on `workers` threads, contiguous chunks each.
template <class Job>
void parallel_for(std::size_t n, std::size_t workers, Job job) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) job(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w * chunk; i < std::min(n, (w + 1) * chunk); ++i) job(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace detail

/// Generates models and formulas, evaluates each by contraction and by the
/// oracle, and counts disagreements. Results are identical for a given
/// config regardless of the number of workers.
inline SweepReport equivalence_sweep(const SweepConfig& cfg) {
  SweepReport report;
  report.config = cfg;
  const CompileOptions opts{cfg.element_cap};

  if (!cfg.exhaustive) {
    report.records.resize(cfg.count);
    detail::parallel_for(cfg.count, cfg.workers, [&](std::size_t i) {
      const std::uint64_t s = instance_seed(cfg.seed, i);
      Rng rng(s);
      ModelGenConfig mg;
      mg.max_domain = cfg.max_domain;
      const Model m = random_model(rng, mg);
      const FormulaPtr f = random_formula(rng, m, cfg.max_depth);
      report.records[i] = detail::run_instance(*f, m, s, i, opts);
    });
    report.models = report.instances = cfg.count;
    for (const auto& r : report.records) report.disagreements += r.verdict.agree ? 0 : 1;
  } else {
    const std::vector<Model> models = exhaustive_models(cfg.max_domain, cfg.model_cap, cfg.seed);
    std::vector<std::vector<SweepRecord>> failures(models.size());
    std::vector<std::size_t> counts(models.size(), 0);
    detail::parallel_for(models.size(), cfg.workers, [&](std::size_t k) {
      const auto formulas = exhaustive_formulas(models[k], cfg.max_depth, k);
      counts[k] = formulas.size();
      for (std::size_t i = 0; i < formulas.size(); ++i) {
        const CompileOptions o = opts;
        bool failed = false;
        try {
          failed = !agrees(*formulas[i], models[k], o);
        } catch (const std::exception&) {
          failed = true;
        }
        if (failed) failures[k].push_back(detail::run_instance(*formulas[i], models[k], cfg.seed, k, o));
      }
    });
    report.models = models.size();
    for (std::size_t k = 0; k < models.size(); ++k) {
      report.instances += counts[k];
      report.disagreements += failures[k].size();
      for (auto& r : failures[k]) report.records.push_back(std::move(r));
    }
  }

  if (cfg.artifact_dir) {
    for (const auto& r : report.records) {
      if (!r.verdict.agree) detail::write_artifact(*cfg.artifact_dir, r);
    }
  }
  return report;
}

}  // namespace tenlog
