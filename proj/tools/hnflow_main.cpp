// hnflow: exact Harder-Narasimhan filtrations, optimal destabilizing
// directions and brute-force certification for split bundles and pairs.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hnflow/io.hpp"
#include "hnflow/oracle.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolations = 1;
constexpr int kExitUsage = 2;

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path);
  if (!in) throw hnflow::SpecError("cannot open input file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

hnflow::BundleSpec load_spec(const std::string& path, bool model_check) {
  const auto spec = hnflow::parse_bundle_spec_text(read_input(path));
  if (spec.pair && model_check) {
    const auto p = hnflow::spec_pair(spec);
    if (!p.satisfies_slope_bound())
      throw hnflow::SpecError(
          "pair violates the slope(E) >= tau assumption; pass "
          "--no-model-check to proceed anyway");
  }
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact Harder-Narasimhan filtrations and optimal "
               "destabilizers for split bundles and holomorphic pairs"};
  app.require_subcommand(1);

  std::string input;
  bool model_check = true;
  app.add_flag("--model-check,!--no-model-check", model_check,
               "validate slope(E) >= tau for pair inputs (default on)");

  auto* hn = app.add_subcommand(
      "hn", "Harder-Narasimhan filtration, quotients and polygon");
  hn->add_option("input", input, "input file (default: stdin)");

  auto* destab = app.add_subcommand(
      "destabilize", "optimal destabilizing direction and limit object");
  destab->add_option("input", input, "input file (default: stdin)");

  std::string format = "json";
  auto* polygon = app.add_subcommand("polygon", "filtration polygon");
  polygon->add_option("input", input, "input file (default: stdin)");
  polygon->add_option("--format", format, "output format: json or svg")
      ->default_val("json");

  std::string config_path;
  auto* verify = app.add_subcommand(
      "verify", "brute-force certification sweep of the closed forms");
  verify->add_option("--config", config_path, "sweep config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (hn->parsed()) {
      std::cout << hnflow::dump_document(
          hnflow::hn_document(load_spec(input, model_check)));
      return kExitOk;
    }
    if (destab->parsed()) {
      std::cout << hnflow::dump_document(
          hnflow::destabilize_document(load_spec(input, model_check)));
      return kExitOk;
    }
    if (polygon->parsed()) {
      const auto spec = load_spec(input, model_check);
      if (format == "json") {
        std::cout << hnflow::dump_document(hnflow::polygon_document(spec));
      } else if (format == "svg") {
        std::cout << hnflow::polygon_svg(spec);
      } else {
        std::cerr << "unknown polygon format: " << format << "\n";
        return kExitUsage;
      }
      return kExitOk;
    }
    if (verify->parsed()) {
      hnflow::SweepConfig cfg = hnflow::default_sweep_config();
      if (!config_path.empty()) {
        nlohmann::json doc;
        try {
          doc = nlohmann::json::parse(read_input(config_path));
        } catch (const nlohmann::json::parse_error& e) {
          throw hnflow::SpecError(e.what());
        }
        cfg = hnflow::parse_sweep_config(doc);
      }
      std::cerr << "sweeping bundles (rank <= " << cfg.max_rank
                << ", twists in [" << cfg.twist_min << ", " << cfg.twist_max
                << "]) ...\n";
      const auto classical = hnflow::certify_classical(cfg);
      std::cerr << "classical: " << classical.bundles << " bundles, "
                << classical.violations.size() << " violations\n";
      const auto pairs = hnflow::certify_pairs(cfg);
      std::cerr << "pairs: " << pairs.instances << " instances, "
                << pairs.violations.size() << " violations\n";
      std::cout << hnflow::dump_document(
          hnflow::verify_document(cfg, classical, pairs));
      return (classical.ok() && pairs.ok()) ? kExitOk : kExitViolations;
    }
  } catch (const hnflow::SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
