#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "omora/config.hpp"
#include "omora/controller.hpp"
#include "omora/simulation.hpp"

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

std::uint64_t parse_u64(const std::string& s) {
  std::size_t used = 0;
  const unsigned long long v = std::stoull(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad seed '" + s + "'");
  return v;
}

// "N..M" (inclusive) or a comma-separated list.
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    const std::uint64_t lo = parse_u64(text.substr(0, dots));
    const std::uint64_t hi = parse_u64(text.substr(dots + 2));
    if (hi < lo) throw std::invalid_argument("empty seed range '" + text + "'");
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    return seeds;
  }
  for (const auto& part : split(text, ',')) seeds.push_back(parse_u64(part));
  if (seeds.empty()) throw std::invalid_argument("no seeds given");
  return seeds;
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> values;
  for (const auto& part : split(text, ',')) {
    std::size_t used = 0;
    values.push_back(std::stod(part, &used));
    if (used != part.size()) throw std::invalid_argument("bad axis value '" + part + "'");
  }
  if (values.empty()) throw std::invalid_argument("no axis values given");
  return values;
}

std::vector<omora::PolicyKind> parse_policies(const std::string& text) {
  std::vector<omora::PolicyKind> out;
  for (const auto& part : split(text, ',')) out.push_back(omora::parse_policy(part));
  if (out.empty()) throw std::invalid_argument("no policies given");
  return out;
}

omora::NetworkConfig load_or_default(const std::string& path) {
  return path.empty() ? omora::NetworkConfig{} : omora::load_config(path);
}

void emit_summary(const std::string& out, const std::vector<omora::SummaryRow>& rows) {
  if (out.empty()) {
    omora::write_summary_csv(std::cout, rows);
  } else {
    omora::write_summary_csv(out, rows);
  }
}

// <stem>_<policy>_s<seed><ext> next to `base`.
std::string run_trace_path(const std::string& base, omora::PolicyKind policy, std::uint64_t seed) {
  const std::filesystem::path p(base);
  const std::string name =
      p.stem().string() + "_" + std::string(omora::policy_name(policy)) + "_s" + std::to_string(seed) +
      p.extension().string();
  return (p.parent_path() / name).string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mobility-aware MEC offloading simulator"};
  app.require_subcommand(1);

  std::string config_path, policy_text = "omora-sdp", policies_text = "omora-sdp,nl,nm";
  std::string seeds_text, axis_text, values_text, out_path, trace_path;
  std::uint64_t seed = 0;

  auto* run_cmd = app.add_subcommand("run", "Simulate one policy for one seed");
  run_cmd->add_option("--config", config_path, "JSON config (defaults when omitted)");
  run_cmd->add_option("--policy", policy_text, "omora-sdp | omora-exact | nl | nm");
  auto* seed_opt = run_cmd->add_option("--seed", seed, "Random seed (config seed when omitted)");
  run_cmd->add_option("--out", out_path, "Summary CSV (stdout when omitted)");
  run_cmd->add_option("--trace", trace_path, "Per-slot trace CSV");

  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep one parameter over values, policies and seeds");
  sweep_cmd->add_option("--config", config_path, "JSON config (defaults when omitted)");
  sweep_cmd->add_option("--axis", axis_text, "V | R_th | eps")->required();
  sweep_cmd->add_option("--values", values_text, "Comma-separated axis values")->required();
  sweep_cmd->add_option("--policies", policies_text, "Comma-separated policies");
  sweep_cmd->add_option("--seeds", seeds_text, "N..M or comma-separated list")->required();
  sweep_cmd->add_option("--out", out_path, "Summary CSV (stdout when omitted)");

  auto* compare_cmd = app.add_subcommand("compare", "Run several policies on shared seeds");
  compare_cmd->add_option("--config", config_path, "JSON config (defaults when omitted)");
  compare_cmd->add_option("--policies", policies_text, "Comma-separated policies");
  compare_cmd->add_option("--seeds", seeds_text, "N..M or comma-separated list")->required();
  compare_cmd->add_option("--out", out_path, "Summary CSV (stdout when omitted)");
  compare_cmd->add_option("--trace", trace_path, "Trace CSV base name, one file per run");

  auto* validate_cmd = app.add_subcommand("validate-config", "Check a JSON config and print its hash");
  validate_cmd->add_option("--config", config_path, "JSON config")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      const omora::NetworkConfig cfg = load_or_default(config_path);
      const omora::PolicyKind policy = omora::parse_policy(policy_text);
      const std::uint64_t s = seed_opt->count() > 0 ? seed : cfg.seed;
      const omora::RunSummary summary = omora::run(cfg, policy, s);
      emit_summary(out_path, {omora::summary_row(summary)});
      if (!trace_path.empty()) omora::write_trace_csv(trace_path, summary.trace);
    } else if (*sweep_cmd) {
      const omora::NetworkConfig cfg = load_or_default(config_path);
      const auto axis = omora::parse_axis(axis_text);
      const auto values = parse_values(values_text);
      const auto policies = parse_policies(policies_text);
      const auto seeds = parse_seeds(seeds_text);
      emit_summary(out_path, omora::sweep(cfg, axis, values, policies, seeds));
    } else if (*compare_cmd) {
      const omora::NetworkConfig cfg = load_or_default(config_path);
      const auto policies = parse_policies(policies_text);
      const auto seeds = parse_seeds(seeds_text);
      std::vector<omora::SummaryRow> rows;
      for (std::uint64_t s : seeds) {
        for (omora::PolicyKind p : policies) {
          const omora::RunSummary summary = omora::run(cfg, p, s);
          rows.push_back(omora::summary_row(summary));
          if (!trace_path.empty()) omora::write_trace_csv(run_trace_path(trace_path, p, s), summary.trace);
        }
      }
      emit_summary(out_path, rows);
    } else if (*validate_cmd) {
      const omora::NetworkConfig cfg = omora::load_config(config_path);
      std::cout << "ok " << omora::config_hash(cfg) << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
