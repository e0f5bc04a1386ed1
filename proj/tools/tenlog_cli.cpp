// Command-line front end.
//
// Exit codes: 0 true (or success), 1 false, 2 error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tenlog/tenlog.hpp"

namespace {

constexpr int kExitTrue = 0;
constexpr int kExitFalse = 1;
constexpr int kExitError = 2;

enum class OutputMode { kPretty, kRecords };
enum class TruthMode { kCrisp, kProb };

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw tenlog::Error(tenlog::ErrorCode::kSyntaxError, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string pretty_truth(const tenlog::TruthVec& v, TruthMode mode) {
  if (mode == TruthMode::kCrisp) return v.is_top() ? "⊤" : "⊥";
  return "[" + tenlog::format_number(v.t()) + ", " + tenlog::format_number(v.f()) + "]";
}

bool contains_soft_literal(const tenlog::Formula& f) {
  using tenlog::Formula;
  return std::visit(tenlog::Overloaded{
                        [](const Formula::Const& x) { return !x.value.is_crisp(); },
                        [](const Formula::Not& x) { return contains_soft_literal(*x.operand); },
                        [](const Formula::Binary& x) {
                          return contains_soft_literal(*x.lhs) || contains_soft_literal(*x.rhs);
                        },
                        [](const auto&) { return false; },
                    },
                    f.node);
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
  std::string model_path;
  std::string formula;
  std::string formula_file;
  TruthMode mode = TruthMode::kCrisp;
  OutputMode output = OutputMode::kPretty;
  std::size_t cap = tenlog::kDefaultElementCap;
};

/// Formula files hold one formula per line; blank and comment lines are
/// skipped.
std::vector<std::string> formula_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    const std::string body = line.substr(0, hash);
    if (body.find_first_not_of(" \t\r") != std::string::npos) out.push_back(body);
  }
  return out;
}

int cmd_eval(const EvalArgs& args) {
  const tenlog::Model model = tenlog::parse_model(read_file(args.model_path));
  const bool batch = !args.formula_file.empty();
  const std::vector<std::string> texts =
      batch ? formula_lines(read_file(args.formula_file)) : std::vector<std::string>{args.formula};
  if (texts.empty()) {
    throw tenlog::Error(tenlog::ErrorCode::kSyntaxError, "no formula given");
  }

  // Parse everything first so a bad line fails before any output.
  std::vector<tenlog::FormulaPtr> formulas;
  for (const auto& t : texts) {
    tenlog::FormulaPtr f = tenlog::parse_formula(t, model);
    if (args.mode == TruthMode::kCrisp && contains_soft_literal(*f)) {
      throw tenlog::Error(tenlog::ErrorCode::kInvalidTruthVec,
                          "probabilistic literal in crisp mode (use --mode prob)");
    }
    formulas.push_back(std::move(f));
  }

  bool all_true = true;
  for (const auto& f : formulas) {
    const tenlog::TruthVec v = tenlog::evaluate(*f, model, {args.cap});
    // In probabilistic mode a value counts as true when it leans true.
    const bool truth = args.mode == TruthMode::kCrisp ? v.is_top() : v.t() > v.f();
    all_true = all_true && truth;
    if (args.output == OutputMode::kRecords) {
      nlohmann::json j;
      j["formula"] = tenlog::print_formula(*f);
      j["result"] = tenlog::truth_label(v);
      j["t"] = v.t();
      j["f"] = v.f();
      std::cout << j.dump() << '\n';
    } else if (batch) {
      std::cout << pretty_truth(v, args.mode) << '\t' << tenlog::print_formula(*f) << '\n';
    } else {
      std::cout << pretty_truth(v, args.mode) << '\n';
    }
  }
  return all_true ? kExitTrue : kExitFalse;
}

// ---------------------------------------------------------------------------
// truth-table

int cmd_truth_table(const std::string& name, bool self_check, OutputMode output) {
  using tenlog::Connective;
  using tenlog::TruthVec;
  const Connective kind = tenlog::parse_connective(name);
  const tenlog::ConnectiveTensor& tensor = tenlog::connective_tensor(kind);
  auto label = [](const TruthVec& v) { return v.is_top() ? "T" : v.is_bot() ? "F" : "?"; };
  auto classical = [kind](bool a, bool b) {
    switch (kind) {
      case Connective::kAnd: return a && b;
      case Connective::kOr: return a || b;
      case Connective::kImplies: return !a || b;
      case Connective::kNot: return !a;
    }
    return false;
  };

  bool ok = true;
  nlohmann::json rows = nlohmann::json::array();
  std::ostringstream table;
  if (kind == Connective::kNot) {
    table << "a | ~a\n";
    for (bool a : {true, false}) {
      const TruthVec out = tenlog::connective_not(TruthVec::of(a));
      ok = ok && out == TruthVec::of(classical(a, false));
      table << label(TruthVec::of(a)) << " | " << label(out) << '\n';
      rows.push_back({{"a", label(TruthVec::of(a))}, {"result", label(out)}});
    }
  } else {
    table << "a b | a " << tenlog::connective_symbol(kind) << " b\n";
    for (bool a : {true, false}) {
      for (bool b : {true, false}) {
        const TruthVec out = tenlog::connective_binary(kind, TruthVec::of(a), TruthVec::of(b));
        ok = ok && out == TruthVec::of(classical(a, b));
        table << label(TruthVec::of(a)) << ' ' << label(TruthVec::of(b)) << " | " << label(out)
              << '\n';
        rows.push_back({{"a", label(TruthVec::of(a))},
                        {"b", label(TruthVec::of(b))},
                        {"result", label(out)}});
      }
    }
  }

  if (output == OutputMode::kRecords) {
    nlohmann::json j;
    j["connective"] = std::string(tenlog::connective_name(kind));
    j["blocks"] = tensor.block_layout();
    j["rows"] = rows;
    if (self_check) j["check"] = ok;
    std::cout << j.dump() << '\n';
  } else {
    std::cout << "T^" << tenlog::connective_name(kind) << " =\n"
              << tensor.block_layout() << '\n'
              << table.str();
    if (self_check) std::cout << "check: " << (ok ? "ok" : "FAILED") << '\n';
  }
  return self_check && !ok ? kExitError : kExitTrue;
}

// ---------------------------------------------------------------------------
// show

tenlog::Tensor slice(const tenlog::Tensor& t, std::size_t b) {
  const std::size_t cells = t.size() / t.dim(0);
  tenlog::Shape rest(t.shape().begin() + 1, t.shape().end());
  const auto d = t.data();
  return tenlog::Tensor(std::move(rest), std::vector<double>(d.begin() + b * cells,
                                                             d.begin() + (b + 1) * cells));
}

int cmd_show(const std::string& model_path, const std::string& name, std::size_t cap) {
  const tenlog::Model m = tenlog::parse_model(read_file(model_path));
  std::ostringstream domain;
  for (std::size_t i = 0; i < m.domain_size(); ++i) domain << (i ? " " : "") << m.atoms()[i].name;

  if (m.atom_index(name)) {
    std::cout << "atom " << name << " over [" << domain.str() << "]\n"
              << tenlog::format_tensor(tenlog::encode_atom(m, name)) << '\n';
    return kExitTrue;
  }
  if (m.find_predicate(name)) {
    const tenlog::PredicateMatrix truth = tenlog::build_predicate(m, name);
    const tenlog::SetPredicateMatrix set = tenlog::build_set_predicate(m, name);
    const bool forward = tenlog::convert_truth_to_set(truth) == set;
    const bool backward = tenlog::convert_set_to_truth(set) == truth;
    std::cout << "predicate " << name << " over [" << domain.str() << "]\n"
              << "truth formulation M (B x D):\n"
              << tenlog::format_tensor(truth.tensor())
              << "set formulation M' (D x D):\n"
              << tenlog::format_tensor(set.tensor())
              << "diag(p M) == M': " << (forward ? "yes" : "NO") << '\n'
              << "M recovered from M': " << (backward ? "yes" : "NO") << '\n';
    return forward && backward ? kExitTrue : kExitError;
  }
  if (m.find_relation(name)) {
    const tenlog::RelationTensor r = tenlog::build_relation(m, name, cap);
    std::cout << "relation " << name << "/" << r.arity() << " over [" << domain.str()
              << "], shape " << tenlog::shape_string(r.tensor().shape()) << '\n'
              << "(rightmost domain index is the first argument)\n"
              << "true slice:\n"
              << tenlog::format_tensor(slice(r.tensor(), 0));
    if (r.arity() == 1) std::cout << '\n';
    std::cout << "false slice:\n" << tenlog::format_tensor(slice(r.tensor(), 1));
    if (r.arity() == 1) std::cout << '\n';
    return kExitTrue;
  }
  throw tenlog::Error(tenlog::ErrorCode::kUnknownName, "'" + name + "' is not declared in the model");
}

// ---------------------------------------------------------------------------
// sweep

int cmd_sweep(const tenlog::SweepConfig& cfg, OutputMode output, const std::string& report_path) {
  const tenlog::SweepReport report = tenlog::equivalence_sweep(cfg);
  const std::string records = tenlog::to_records(report);
  if (!report_path.empty()) {
    std::ofstream out(report_path);
    if (!out) throw tenlog::Error(tenlog::ErrorCode::kSyntaxError, "cannot write '" + report_path + "'");
    out << records;
  }
  if (output == OutputMode::kRecords) {
    std::cout << records;
  } else {
    std::cout << (cfg.exhaustive ? "exhaustive" : "random") << " sweep, seed " << cfg.seed << ": "
              << report.models << " models, " << report.instances << " instances, "
              << report.disagreements << " disagreements\n";
    for (const auto& r : report.records) {
      if (r.verdict.agree) continue;
      std::cout << "DISAGREE [" << r.index << "] " << r.verdict.formula << "  tensor="
                << (r.error.empty() ? tenlog::truth_label(r.verdict.tensor_result) : r.error)
                << " oracle=" << (r.verdict.oracle_result ? "T" : "F") << '\n'
                << r.model_text << r.plan_text;
    }
  }
  return report.ok() ? kExitTrue : kExitFalse;
}

// ---------------------------------------------------------------------------
// witness

int cmd_witness(double alpha, double beta) {
  const auto fa = tenlog::nonlinearity_witness_forall(alpha, beta);
  const auto ex = tenlog::nonlinearity_witness_exists(alpha);
  std::cout << fa.report << '\n' << ex.report << '\n';
  return fa.confirmed && ex.confirmed ? kExitTrue : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tensor-contraction evaluator for finite predicate logic"};
  app.require_subcommand(1);

  const std::map<std::string, OutputMode> output_names{{"pretty", OutputMode::kPretty},
                                                        {"records", OutputMode::kRecords}};
  const std::map<std::string, TruthMode> mode_names{{"crisp", TruthMode::kCrisp},
                                                    {"prob", TruthMode::kProb}};

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate formulas against a model");
  eval_cmd->add_option("--model", eval.model_path, "Model file")->required()->check(CLI::ExistingFile);
  auto* formula_opt = eval_cmd->add_option("--formula", eval.formula, "Formula text");
  auto* file_opt = eval_cmd->add_option("--formula-file", eval.formula_file, "File with one formula per line")
                       ->check(CLI::ExistingFile);
  formula_opt->excludes(file_opt);
  eval_cmd->add_option("--mode", eval.mode, "crisp or prob")
      ->transform(CLI::CheckedTransformer(mode_names, CLI::ignore_case));
  eval_cmd->add_option("--output", eval.output, "pretty or records")
      ->transform(CLI::CheckedTransformer(output_names, CLI::ignore_case));
  eval_cmd->add_option("--cap", eval.cap, "Largest tensor, in elements");

  std::string connective;
  bool self_check = false;
  OutputMode table_output = OutputMode::kPretty;
  auto* table_cmd = app.add_subcommand("truth-table", "Print a connective tensor and its truth table");
  table_cmd->add_option("connective", connective, "not, and, or, implies")->required();
  table_cmd->add_flag("--check", self_check, "Compare with the classical table");
  table_cmd->add_option("--output", table_output, "pretty or records")
      ->transform(CLI::CheckedTransformer(output_names, CLI::ignore_case));

  std::string show_model, show_name;
  std::size_t show_cap = tenlog::kDefaultElementCap;
  auto* show_cmd = app.add_subcommand("show", "Print the tensors for a declared name");
  show_cmd->add_option("--model", show_model, "Model file")->required()->check(CLI::ExistingFile);
  show_cmd->add_option("--name,name", show_name, "Atom, predicate or relation")->required();
  show_cmd->add_option("--cap", show_cap, "Largest tensor, in elements");

  tenlog::SweepConfig sweep;
  OutputMode sweep_output = OutputMode::kPretty;
  std::string report_path, artifact_dir;
  auto* sweep_cmd = app.add_subcommand("sweep", "Compare tensor evaluation with the set oracle");
  sweep_cmd->add_option("--seed", sweep.seed, "Random seed");
  sweep_cmd->add_option("--max-domain", sweep.max_domain, "Largest domain size")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--max-depth", sweep.max_depth, "Largest formula depth")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--count", sweep.count, "Random instances");
  sweep_cmd->add_flag("--exhaustive", sweep.exhaustive, "Enumerate models and formulas");
  sweep_cmd->add_option("--model-cap", sweep.model_cap, "Models visited in exhaustive mode");
  sweep_cmd->add_option("--workers", sweep.workers, "Threads (0 = all cores)");
  sweep_cmd->add_option("--cap", sweep.element_cap, "Largest tensor, in elements");
  sweep_cmd->add_option("--output", sweep_output, "pretty or records")
      ->transform(CLI::CheckedTransformer(output_names, CLI::ignore_case));
  sweep_cmd->add_option("--report", report_path, "Write records to this file");
  sweep_cmd->add_option("--artifacts", artifact_dir, "Directory for disagreement files");

  double alpha = 2.0, beta = 2.0;
  auto* witness_cmd = app.add_subcommand("witness", "Show that forall and exists are not multilinear");
  witness_cmd->add_option("--alpha", alpha, "Scale of the first argument");
  witness_cmd->add_option("--beta", beta, "Scale of the second argument");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (*eval_cmd) {
      if (formula_opt->count() == 0 && file_opt->count() == 0) {
        std::cerr << "error: one of --formula or --formula-file is required\n";
        return kExitError;
      }
      return cmd_eval(eval);
    }
    if (*table_cmd) return cmd_truth_table(connective, self_check, table_output);
    if (*show_cmd) return cmd_show(show_model, show_name, show_cap);
    if (*sweep_cmd) {
      if (!artifact_dir.empty()) sweep.artifact_dir = artifact_dir;
      return cmd_sweep(sweep, sweep_output, report_path);
    }
    if (*witness_cmd) return cmd_witness(alpha, beta);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
