#include "bvdiff/cli_app.hpp"

#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "bvdiff/boolfn.hpp"
#include "bvdiff/cipher.hpp"
#include "bvdiff/finder.hpp"
#include "bvdiff/keyrec.hpp"
#include "bvdiff/oracle.hpp"

namespace bvdiff {

namespace {

constexpr int kReportVersion = 1;

CipherSpec load_cipher(const std::string& name, const std::string& file) {
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open cipher file: " + file);
    nlohmann::json j;
    in >> j;
    return CipherSpec::from_json(j);
  }
  return cipher_zoo(name);
}

BooleanFunction load_function(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open function file: " + file);
  nlohmann::json j;
  in >> j;
  return BooleanFunction::from_json(j);
}

void emit_report(const nlohmann::json& report, const std::string& out_path,
                 std::ostream& out) {
  std::string text = report.dump(2);
  text.push_back('\n');
  if (out_path.empty()) {
    out << text;
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write report: " + out_path);
    f << text;
  }
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  const char* env = std::getenv("BVDIFF_SEED");
  if (env) return std::strtoull(env, nullptr, 0);
  throw CLI::ValidationError("--seed is required (or set BVDIFF_SEED)");
}

// Exhaustive verification block for a truncated finding, attached when the
// joint space is small enough to enumerate.
nlohmann::json verify_truncated_block(const CipherSpec& spec,
                                      const TruncatedDifferential& td,
                                      const Rational& sigma,
                                      std::uint64_t q_value) {
  Rational threshold = Rational(1) - sigma;
  KeyFractionReport kf =
      key_fraction(spec, td.input_diff, td.output, threshold);
  Rational needed(static_cast<std::int64_t>(q_value) - 1,
                  static_cast<std::int64_t>(q_value));
  nlohmann::json j = kf.to_json();
  j["required_fraction"] = needed.to_string();
  j["verdict"] = kf.fraction_above >= needed;
  return j;
}

nlohmann::json verify_impossible_block(const CipherSpec& spec,
                                       const ImpossibleResult& ir) {
  ImpossibilityReport rep =
      ir.flag == 0
          ? verify_impossible(spec, ir.input_diff, ir.output_diff)
          : verify_probability_one(spec, ir.input_diff, ir.output_diff);
  nlohmann::json j = rep.to_json();
  j["checked"] = ir.flag == 0 ? "impossible" : "probability-one";
  return j;
}

int cmd_spectrum(const std::string& fn_file, const std::string& out_path,
                 std::ostream& out) {
  BooleanFunction f = load_function(fn_file);
  WalshSpectrum s = walsh_spectrum(f);
  nlohmann::json j{{"report_version", kReportVersion},
                   {"kind", "spectrum"},
                   {"arity", s.arity},
                   {"raw", s.raw},
                   {"support_size", s.support().size()},
                   {"parseval_ok", s.parseval_ok()}};
  emit_report(j, out_path, out);
  return s.parseval_ok() ? 0 : 1;
}

int cmd_algo1(const std::string& fn_file, std::uint64_t runs,
              std::uint64_t seed, std::uint64_t gate_cost,
              const std::string& out_path, std::ostream& out) {
  BooleanFunction f = load_function(fn_file);
  Algorithm1Result res = algorithm1(f, runs, seed, gate_cost);
  nlohmann::json j{{"report_version", kReportVersion},
                   {"kind", "algo1"},
                   {"arity", f.arity()},
                   {"runs", runs},
                   {"seed", seed},
                   {"found", res.found}};
  j["ledger"] = res.ledger.to_json();
  if (res.found) {
    auto dump_set = [&](const AffineSolutionSet& s) {
      nlohmann::json hexes = nlohmann::json::array();
      if (!s.empty && s.dim() <= 12)
        for (Word w : enumerate_members(s, std::uint64_t{1} << 12))
          hexes.push_back(word_to_hex(w, f.arity()));
      return nlohmann::json{{"empty", s.empty},
                            {"dim", s.empty ? 0 : s.dim()},
                            {"members", hexes}};
    };
    j["a0"] = dump_set(res.a0);
    j["a1"] = dump_set(res.a1);
  }
  emit_report(j, out_path, out);
  return res.found ? 0 : 2;
}

int cmd_truncdiff(const std::string& cipher, const std::string& cipher_file,
                  const std::string& sigma_text, std::uint64_t q_value,
                  std::uint64_t budget, std::uint64_t seed,
                  const std::string& out_path, std::ostream& out) {
  CipherSpec spec = load_cipher(cipher, cipher_file);
  TruncDiffConfig cfg;
  cfg.sigma = Rational::parse(sigma_text);
  cfg.q_value = q_value;
  cfg.probe_budget = budget;
  cfg.seed = seed;
  TruncDiffOutcome res = find_truncated_differential(spec, cfg);

  nlohmann::json j{{"report_version", kReportVersion},
                   {"kind", "truncdiff"},
                   {"cipher", spec.name},
                   {"seed", seed},
                   {"probes_used", res.probes_used},
                   {"found", res.result.has_value()}};
  if (res.result) {
    j["finding"] = finding_to_json(*res.result, cfg.sigma, cfg.q_value,
                                   res.ledger, res.predicted);
    if (spec.block_bits + spec.reduced_key_bits() <= 20)
      j["oracle"] = verify_truncated_block(spec, *res.result, cfg.sigma,
                                           cfg.q_value);
  } else {
    j["reason"] = failure_name(res.failure);
    j["ledger"] = res.ledger.to_json();
    j["ledger"]["formula_predicted"] = res.predicted.to_json();
  }
  emit_report(j, out_path, out);
  return res.result ? 0 : 2;
}

int cmd_impdiff(const std::string& cipher, const std::string& cipher_file,
                std::uint64_t runs, std::uint64_t seed,
                const std::string& out_path, std::ostream& out) {
  CipherSpec spec = load_cipher(cipher, cipher_file);
  if (runs == 0) runs = 3 * static_cast<std::uint64_t>(spec.block_bits);
  ImpDiffOutcome res = find_impossible_differential(spec, runs, seed);
  nlohmann::json j{{"report_version", kReportVersion},
                   {"kind", "impdiff"},
                   {"cipher", spec.name},
                   {"seed", seed},
                   {"runs_per_component", runs},
                   {"found", res.result.has_value()}};
  if (res.result) {
    j["finding"] =
        finding_to_json(*res.result, spec.block_bits, res.ledger, res.predicted);
    if (spec.block_bits + spec.reduced_key_bits() <= 24)
      j["oracle"] = verify_impossible_block(spec, *res.result);
  } else {
    j["reason"] = "no-nontrivial-structure";
    j["ledger"] = res.ledger.to_json();
    j["ledger"]["formula_predicted"] = res.predicted.to_json();
  }
  emit_report(j, out_path, out);
  return res.result ? 0 : 2;
}

int cmd_keyrec(const std::string& cipher, const std::string& cipher_file,
               const std::string& in_diff_hex, const std::string& trits,
               std::uint64_t pairs, std::uint64_t seed,
               const std::string& out_path, const std::string& csv_path,
               std::ostream& out) {
  CipherSpec spec = load_cipher(cipher, cipher_file);
  Word in_diff = word_from_hex(in_diff_hex, spec.block_bits);
  TritPattern pattern = TritPattern::parse(trits);
  int t = pattern.predicted_count();
  if (t < 1) throw CLI::ValidationError("pattern needs a predicted trit");

  // Exact differential probability for the S/N report (exhaustive keys).
  KeyFractionReport kf = key_fraction(spec, in_diff, pattern, Rational(0));
  SNReport sn = signal_to_noise(std::uint64_t{1} << spec.last_round_key_bits(),
                                kf.mean_v, t);
  if (pairs == 0 && sn.ratio > Rational(1))
    pairs = required_pairs(sn.ratio, kf.mean_v);
  CountingRun run = run_counting_attack(spec, in_diff, pattern, pairs, seed);

  nlohmann::json j{{"report_version", kReportVersion},
                   {"kind", "keyrec"},
                   {"cipher", spec.name},
                   {"seed", seed},
                   {"in_diff", word_to_hex(in_diff, spec.block_bits)},
                   {"pattern", pattern.to_string()},
                   {"sn_report", sn.to_json()},
                   {"attack", run.to_json(spec.last_round_key_bits())}};
  emit_report(j, out_path, out);
  if (!csv_path.empty()) {
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write csv: " + csv_path);
    csv << "candidate,count\n";
    for (std::size_t s = 0; s < run.counters.size(); ++s)
      csv << word_to_hex(static_cast<Word>(s), spec.last_round_key_bits())
          << "," << run.counters[s] << "\n";
  }
  return 0;
}

int cmd_verify(const std::string& finding_file, const std::string& cipher,
               const std::string& cipher_file, const std::string& out_path,
               std::ostream& out) {
  CipherSpec spec = load_cipher(cipher, cipher_file);
  std::ifstream in(finding_file);
  if (!in) throw std::runtime_error("cannot open finding: " + finding_file);
  nlohmann::json report;
  in >> report;
  nlohmann::json finding =
      report.contains("finding") ? report.at("finding") : report;
  std::string type = finding.at("type").get<std::string>();

  nlohmann::json j{{"report_version", kReportVersion},
                   {"kind", "verify"},
                   {"cipher", spec.name},
                   {"finding_type", type}};
  bool ok = false;
  if (type == "truncated") {
    Word a = word_from_hex(finding.at("a_hex").get<std::string>(),
                           spec.block_bits);
    TritPattern b = TritPattern::parse(finding.at("b_trits").get<std::string>());
    Rational sigma = Rational::parse(finding.at("sigma").get<std::string>());
    std::uint64_t q = finding.at("q").get<std::uint64_t>();
    TruncatedDifferential td;
    td.input_diff = a;
    td.output = b;
    nlohmann::json block = verify_truncated_block(spec, td, sigma, q);
    ok = block.at("verdict").get<bool>();
    j["oracle"] = block;
  } else if (type == "impossible") {
    ImpossibleResult ir;
    ir.input_diff = word_from_hex(finding.at("a_hex").get<std::string>(),
                                  spec.block_bits);
    ir.output_diff = word_from_hex(finding.at("dy_hex").get<std::string>(),
                                   spec.block_bits);
    ir.flag = finding.at("flag").get<int>();
    nlohmann::json block = verify_impossible_block(spec, ir);
    ok = block.at("verdict").get<bool>();
    j["oracle"] = block;
  } else {
    throw std::runtime_error("unknown finding type: " + type);
  }
  j["verdict"] = ok;
  emit_report(j, out_path, out);
  return ok ? 0 : 1;
}

int cmd_ddt(const std::string& cipher, const std::string& cipher_file,
            const std::string& key_hex, const std::string& csv_path,
            std::ostream& out) {
  CipherSpec spec = load_cipher(cipher, cipher_file);
  Word key = word_from_hex(key_hex, spec.reduced_key_bits());
  auto table = ddt(spec, key);
  std::ostringstream csv;
  for (std::size_t dx = 0; dx < table.size(); ++dx) {
    for (std::size_t dy = 0; dy < table[dx].size(); ++dy) {
      if (dy) csv << ",";
      csv << table[dx][dy];
    }
    csv << "\n";
  }
  if (csv_path.empty()) {
    out << csv.str();
  } else {
    std::ofstream f(csv_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write csv: " + csv_path);
    f << csv.str();
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Toy-cipher workbench for structure-based differential search"};
  app.require_subcommand(1);

  std::string cipher, cipher_file, fn_file, out_path, csv_path;
  std::string sigma_text = "0.3", in_diff_hex, trits, finding_file;
  std::optional<std::uint64_t> seed_flag;
  std::uint64_t q_value = 4, budget = 1 << 20, runs = 0, pairs = 0,
                gate_cost = 1;

  auto add_cipher_opts = [&](CLI::App* cmd) {
    cmd->add_option("--cipher", cipher, "zoo cipher name");
    cmd->add_option("--cipher-file", cipher_file, "cipher JSON file");
  };

  CLI::App* spectrum = app.add_subcommand("spectrum", "dump a Walsh spectrum");
  spectrum->add_option("--fn", fn_file, "function JSON file")->required();
  spectrum->add_option("--out", out_path, "report path");

  CLI::App* algo1 = app.add_subcommand("algo1", "linear-structure search");
  algo1->add_option("--fn", fn_file, "function JSON file")->required();
  algo1->add_option("--runs", runs, "sampling runs")->default_val(32);
  algo1->add_option("--gate-cost", gate_cost, "circuit size metadata");
  algo1->add_option("--seed", seed_flag, "sampling seed");
  algo1->add_option("--out", out_path, "report path");

  CLI::App* trunc = app.add_subcommand("truncdiff",
                                       "truncated-differential search");
  add_cipher_opts(trunc);
  trunc->add_option("--sigma", sigma_text, "probability slack in (0,1)");
  trunc->add_option("--q", q_value, "key-fraction polynomial value");
  trunc->add_option("--budget", budget, "subset probe budget");
  trunc->add_option("--seed", seed_flag, "sampling seed");
  trunc->add_option("--out", out_path, "report path");

  CLI::App* imp = app.add_subcommand("impdiff",
                                     "impossible-differential search");
  add_cipher_opts(imp);
  imp->add_option("--runs", runs, "runs per component (default 3n)");
  imp->add_option("--seed", seed_flag, "sampling seed");
  imp->add_option("--out", out_path, "report path");

  CLI::App* krec = app.add_subcommand("keyrec", "last-round counting attack");
  add_cipher_opts(krec);
  krec->add_option("--in-diff", in_diff_hex, "input difference, hex")->required();
  krec->add_option("--trits", trits, "output pattern, e.g. 0110xxxx")->required();
  krec->add_option("--pairs", pairs, "pair count (default from S/N)");
  krec->add_option("--seed", seed_flag, "sampling seed");
  krec->add_option("--out", out_path, "report path");
  krec->add_option("--csv", csv_path, "counting histogram CSV path");

  CLI::App* verify = app.add_subcommand("verify", "re-check a finding file");
  add_cipher_opts(verify);
  verify->add_option("--finding", finding_file, "finding JSON file")->required();
  verify->add_option("--out", out_path, "report path");

  CLI::App* ddt_cmd = app.add_subcommand("ddt", "difference table CSV");
  add_cipher_opts(ddt_cmd);
  ddt_cmd->add_option("--key", in_diff_hex, "reduced key, hex")->required();
  ddt_cmd->add_option("--csv", csv_path, "output CSV path");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
    if (spectrum->parsed()) return cmd_spectrum(fn_file, out_path, out);
    if (algo1->parsed())
      return cmd_algo1(fn_file, runs, resolve_seed(seed_flag), gate_cost,
                       out_path, out);
    if (trunc->parsed())
      return cmd_truncdiff(cipher, cipher_file, sigma_text, q_value, budget,
                           resolve_seed(seed_flag), out_path, out);
    if (imp->parsed())
      return cmd_impdiff(cipher, cipher_file, runs, resolve_seed(seed_flag),
                         out_path, out);
    if (krec->parsed())
      return cmd_keyrec(cipher, cipher_file, in_diff_hex, trits, pairs,
                        resolve_seed(seed_flag), out_path, csv_path, out);
    if (verify->parsed())
      return cmd_verify(finding_file, cipher, cipher_file, out_path, out);
    if (ddt_cmd->parsed())
      return cmd_ddt(cipher, cipher_file, in_diff_hex, csv_path, out);
    err << "no subcommand selected\n";
    return 1;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace bvdiff
