#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "kubilius/assembly_class.hpp"
#include "kubilius/conditions.hpp"
#include "kubilius/counting.hpp"
#include "kubilius/errors.hpp"
#include "kubilius/io.hpp"
#include "kubilius/moments.hpp"
#include "kubilius/oracle.hpp"
#include "kubilius/sampler.hpp"

namespace kubilius::cli {
namespace {

using nlohmann::ordered_json;

constexpr std::size_t kVerifyCap = 40;
constexpr double kFloatVerifyTolerance = 1e-9;

struct Options {
  std::string class_spec;
  std::string mode = "exact";
  std::string format = "csv";
  std::string out_path;
  unsigned threads = 1;
  bool verify = false;

  std::size_t n = 0;
  std::size_t n_from = 1;
  std::size_t j = 1;
  std::size_t n_min = 1;
  std::size_t n_max = 0;
  std::vector<std::size_t> exclude;
  std::string family = "w";
  std::optional<std::uint64_t> seed;

  std::string rho;
  std::string Theta, theta, theta_prime;
  std::optional<std::size_t> n0;
  bool auto_constants = false;
  std::size_t N = 100;
  std::string condition = "all";

  std::size_t reps = 10000;
  std::optional<double> tilt;
  std::size_t streams = 16;
  std::uint64_t max_rejections = 10'000'000;
  std::string dump_path;
};

// Writes either to the --out file or to the supplied stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw InvalidArgument("cannot write '" + path + "'");
      stream_ = &file_;
    }
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

Mode mode_of(const Options& o) { return parse_mode(o.mode); }

void require_format(const Options& o) {
  if (o.format != "csv" && o.format != "json")
    throw InvalidArgument("unknown format '" + o.format + "' (expected csv or json)");
}

std::string mismatch(const std::string& what, const std::string& engine, const std::string& oracle) {
  return "verification mismatch at " + what + ": engine " + engine + ", oracle " + oracle;
}

// Exact equality in exact mode; relative error <= 1e-9 in float mode.
void check_against_oracle(const std::string& what, const Number& engine, const Rational& oracle,
                          double log_scale = 0.0) {
  if (engine.is_exact()) {
    if (engine.exact() != oracle) throw VerificationError(mismatch(what, engine.to_string(), to_string(oracle)));
    return;
  }
  const double reference = oracle == 0 ? 0.0 : std::exp(log_abs(oracle) + log_scale) * sgn(oracle);
  if (relative_error(engine.to_double(), reference) > kFloatVerifyTolerance)
    throw VerificationError(mismatch(what, engine.to_string(), format_double(reference)));
}

void note_verify_skipped(std::ostream& err, std::size_t n) {
  err << "note: --verify skipped for n=" << n << " (oracle cap " << kVerifyCap << ")\n";
}

FunctionFamily family_of(const Options& o) { return builtin_family(o.family, o.seed.value_or(0)); }

// ---------------------------------------------------------------------------

int cmd_classes(const Options& o, std::ostream& out) {
  require_format(o);
  Sink sink(o.out_path, out);
  if (o.format == "json") {
    ordered_json list = ordered_json::array();
    for (const auto& name : builtin_class_names()) {
      const auto cls = builtin_class(name);
      list.push_back({{"name", cls.name()},
                      {"rho", cls.rho().text()},
                      {"lambda", cls.formula()},
                      {"description", cls.description()}});
    }
    sink.stream() << list.dump(2) << '\n';
  } else {
    sink.stream() << "name,rho,lambda,description\n";
    for (const auto& name : builtin_class_names()) {
      const auto cls = builtin_class(name);
      sink.stream() << cls.name() << ',' << cls.rho().text() << ",\"" << cls.formula() << "\",\""
                    << cls.description() << "\"\n";
    }
  }
  return kSuccess;
}

int cmd_count(const Options& o, std::ostream& out, std::ostream& err) {
  require_format(o);
  const auto cls = resolve_class(o.class_spec);
  const Mode mode = mode_of(o);
  if (o.n_from > o.n) throw InvalidArgument("--from must not exceed --n");
  const QTable table = q_excl_table(cls, o.n, o.exclude, mode);

  if (o.verify) {
    const auto lambdas = cls.lambdas(std::min(o.n, kVerifyCap));
    for (std::size_t n = o.n_from; n <= o.n; ++n) {
      if (n > kVerifyCap) {
        note_verify_skipped(err, n);
        break;
      }
      Rational oracle;
      for_each_profile(n, [&](const Profile& p) {
        for (std::size_t j : o.exclude)
          if (j < p.s.size() && p.s[j] != 0) return;
        oracle += profile_weight(lambdas, p);
      });
      check_against_oracle("n=" + std::to_string(n), table.value(n), oracle,
                           static_cast<double>(n) * cls.rho().log());
    }
  }

  Sink sink(o.out_path, out);
  if (o.format == "json") {
    sink.stream() << io::table_json(table, cls.name(), o.n_from) << '\n';
  } else if (mode == Mode::exact && o.exclude.empty()) {
    sink.stream() << "n,value,G\n";
    for (std::size_t n = o.n_from; n <= o.n; ++n)
      sink.stream() << n << ',' << table.value(n).to_string() << ','
                    << to_string(Rational(table.exact_values()[n] * factorial(n))) << '\n';
  } else {
    io::write_table_csv(sink.stream(), table, o.n_from);
  }
  return kSuccess;
}

Number constant_from(const std::string& text) {
  // Rational text stays exact; anything else (e.g. exp forms) goes through Rho.
  try {
    return parse_rational(text);
  } catch (const InvalidArgument&) {
    return Rho::parse(text).value();
  }
}

int cmd_check(const Options& o, std::ostream& out, std::ostream& err) {
  require_format(o);
  const auto cls = resolve_class(o.class_spec);
  const Rho rho = o.rho.empty() ? cls.rho() : Rho::parse(o.rho);

  std::vector<ConditionId> conditions;
  if (o.condition == "all")
    conditions.assign(std::begin(kAllConditions), std::end(kAllConditions));
  else
    conditions.push_back(parse_condition(o.condition));

  WeaklyLogParams params;
  params.rho = rho;
  params.Theta = params.theta = params.theta_prime = Number(Rational(1));
  std::optional<ConstantSearch> search;
  if (o.auto_constants) {
    search = search_constants(cls, rho, o.N);
    // A degenerate fit is replaced by the half-range fit, which the full range then tests.
    params = search->degenerate ? search->half.params : search->full.params;
    if (search->degenerate) err << "note: suggested constants degenerate: " << search->reason << '\n';
  } else {
    std::vector<std::string> missing;
    for (auto c : conditions) {
      if ((c == ConditionId::strong || c == ConditionId::upper) && o.Theta.empty()) missing.push_back("--Theta");
      if ((c == ConditionId::strong || c == ConditionId::lower_sum) && o.theta.empty()) missing.push_back("--theta");
      if (c == ConditionId::q_lower && o.theta_prime.empty()) missing.push_back("--theta-prime");
    }
    if (!missing.empty()) {
      std::string msg = "missing constants (or pass --auto):";
      for (const auto& m : missing)
        if (msg.find(m) == std::string::npos) msg += " " + m;
      throw InvalidArgument(msg);
    }
  }
  if (!o.Theta.empty()) params.Theta = constant_from(o.Theta);
  if (!o.theta.empty()) params.theta = constant_from(o.theta);
  if (!o.theta_prime.empty()) params.theta_prime = constant_from(o.theta_prime);
  if (o.n0) params.n0 = *o.n0;

  std::vector<ConditionVerdict> verdicts;
  for (auto c : conditions) verdicts.push_back(check_condition(cls, params, c, o.N));

  Sink sink(o.out_path, out);
  if (o.format == "json") {
    auto doc = ordered_json::parse(io::verdicts_json(verdicts, params, cls.name()));
    if (search) doc["suggestion"] = {{"degenerate", search->degenerate}, {"reason", search->reason}};
    sink.stream() << doc.dump(2) << '\n';
  } else {
    io::write_verdicts_csv(sink.stream(), verdicts);
  }
  return kSuccess;
}

int cmd_pmf(const Options& o, std::ostream& out, std::ostream& err) {
  require_format(o);
  const auto cls = resolve_class(o.class_spec);
  const CountingEngine engine(cls, o.threads);
  const Mode mode = mode_of(o);
  const SpectrumPMF pmf = comp_count_pmf(engine, o.n, o.j, mode);
  if (o.verify) {
    if (o.n > kVerifyCap) {
      note_verify_skipped(err, o.n);
    } else {
      const auto oracle = oracle_pmf(cls, o.n, o.j);
      for (std::size_t k = 0; k < pmf.p.size(); ++k)
        check_against_oracle("k=" + std::to_string(k), pmf.p[k], oracle.p[k].exact());
    }
  }
  Sink sink(o.out_path, out);
  if (o.format == "json")
    sink.stream() << io::pmf_json(pmf, cls.name()) << '\n';
  else
    io::write_pmf_csv(sink.stream(), pmf);
  return kSuccess;
}

void verify_report(const AssemblyClass& cls, const MomentReport& r, const AdditiveFunction& h,
                   std::ostream& err) {
  if (r.n > kVerifyCap) {
    note_verify_skipped(err, r.n);
    return;
  }
  if (!h.rational_valued()) {
    err << "note: --verify skipped for float-only family '" << h.name() << "'\n";
    return;
  }
  const auto summary = oracle_summary(cls, r.n, std::span<const AdditiveFunction>(&h, 1));
  const std::string at = "n=" + std::to_string(r.n);
  check_against_oracle(at + " mean", r.mean, summary.moments[0].first);
  check_against_oracle(at + " variance", r.variance, summary.moments[0].second);
  check_against_oracle(at + " rhs1", r.rhs1, summary.rhs1[0]);
}

void write_single_report(const Options& o, const MomentReport& r, const std::string& cls,
                         const std::string& family, Mode mode, bool with_mean, std::ostream& out) {
  Sink sink(o.out_path, out);
  if (o.format == "json") {
    sink.stream() << io::reports_json({r}, cls, family, mode) << '\n';
    return;
  }
  if (with_mean) {
    io::write_reports_csv(sink.stream(), {r});
    return;
  }
  const auto cell = [](const std::optional<Number>& v) { return v ? v->to_string() : std::string(); };
  sink.stream() << "n,variance,rhs1,rhs2,ratio1,ratio2\n"
                << r.n << ',' << r.variance.to_string() << ',' << r.rhs1.to_string() << ','
                << cell(r.rhs2) << ',' << cell(r.ratio1) << ',' << cell(r.ratio2) << '\n';
}

int cmd_report(const Options& o, std::ostream& out, std::ostream& err, bool with_mean) {
  require_format(o);
  const auto cls = resolve_class(o.class_spec);
  const CountingEngine engine(cls, o.threads);
  const Mode mode = mode_of(o);
  const auto family = family_of(o);
  const AdditiveFunction h = family.at(o.n);
  const MomentReport report = moment_report(engine, o.n, h, mode);
  if (o.verify) verify_report(cls, report, h, err);
  write_single_report(o, report, cls.name(), family.name, mode, with_mean, out);
  return kSuccess;
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
  require_format(o);
  const auto cls = resolve_class(o.class_spec);
  const CountingEngine engine(cls, o.threads);
  const Mode mode = mode_of(o);
  const auto family = family_of(o);
  const std::size_t n_max = o.n_max == 0 ? o.n : o.n_max;
  const SweepResult sweep = tk_ratio_sweep(engine, family, o.n_min, n_max, mode);
  for (std::size_t n : sweep.skipped) err << "note: skipped n=" << n << " (empty support)\n";
  if (o.verify) {
    for (const auto& row : sweep.rows) {
      if (row.n > kVerifyCap) {
        note_verify_skipped(err, row.n);
        break;
      }
      verify_report(cls, row, family.at(row.n), err);
    }
  }
  Sink sink(o.out_path, out);
  if (o.format == "json")
    sink.stream() << io::sweep_json(sweep, cls.name(), family.name, mode) << '\n';
  else
    io::write_reports_csv(sink.stream(), sweep.rows);
  return kSuccess;
}

int cmd_sample(const Options& o, std::ostream& out, std::ostream& err) {
  require_format(o);
  if (!o.seed) throw InvalidArgument("sample requires --seed");
  const auto cls = resolve_class(o.class_spec);
  const auto family = family_of(o);

  SamplerConfig config;
  TiltChoice tilt{o.tilt.value_or(1.0), false};
  if (!o.tilt) tilt = tune_tilt(cls, o.n);
  if (tilt.clamped) err << "note: no tilt root in (0, rho]; using x = rho\n";
  config.tilt = tilt.x;
  config.seed = *o.seed;
  config.streams = o.streams;
  config.threads = o.threads;
  config.max_rejections = o.max_rejections;

  const auto stats = empirical_moments(cls, o.n, family.at(o.n), o.reps, config);

  ordered_json meta = {{"class", cls.name()},
                       {"family", family.name},
                       {"n", o.n},
                       {"reps", o.reps},
                       {"seed", *o.seed},
                       {"streams", o.streams},
                       {"tilt", tilt.x},
                       {"tilt_clamped", tilt.clamped},
                       {"accepted", stats.accepted},
                       {"rejected", stats.rejected},
                       {"acceptance_rate", stats.acceptance_rate()}};

  if (!o.dump_path.empty()) {
    const auto batch = sample_profiles(cls, o.n, o.reps, config);
    std::ofstream dump(o.dump_path);
    if (!dump) throw InvalidArgument("cannot write '" + o.dump_path + "'");
    io::write_profiles_csv(dump, batch.profiles);
    std::ofstream meta_file(o.dump_path + ".json");
    meta_file << meta.dump(2) << '\n';
  }

  Sink sink(o.out_path, out);
  if (o.format == "json") {
    meta["mean_est"] = stats.mean;
    meta["var_est"] = stats.variance;
    meta["stderr"] = stats.stderr_mean;
    sink.stream() << meta.dump(2) << '\n';
  } else {
    sink.stream() << "n,reps,mean_est,var_est,stderr,accepted,rejected,acceptance_rate,tilt,"
                     "tilt_clamped,seed\n"
                  << o.n << ',' << o.reps << ',' << format_double(stats.mean) << ','
                  << format_double(stats.variance) << ',' << format_double(stats.stderr_mean)
                  << ',' << stats.accepted << ',' << stats.rejected << ','
                  << format_double(stats.acceptance_rate()) << ',' << format_double(tilt.x) << ','
                  << (tilt.clamped ? "true" : "false") << ',' << *o.seed << '\n';
  }
  return kSuccess;
}

void add_common(CLI::App* cmd, Options& o, bool needs_class = true) {
  if (needs_class)
    cmd->add_option("--class", o.class_spec, "Built-in class name or path to a JSON class config")
        ->required();
  cmd->add_option("--format", o.format, "Output format: csv or json");
  cmd->add_option("--out", o.out_path, "Write output to this file instead of stdout");
  cmd->add_option("--threads", o.threads, "Upper bound on worker threads")->check(CLI::PositiveNumber);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Component statistics and variance bounds for random assemblies", "kubilius"};
  app.require_subcommand(1);
  Options o;

  auto* classes = app.add_subcommand("classes", "List built-in classes and their weights");
  add_common(classes, o, false);

  auto* count = app.add_subcommand("count", "Q(n) and G(n) tables");
  add_common(count, o);
  count->add_option("--n,--N", o.n, "Largest order")->required();
  count->add_option("--from", o.n_from, "First order printed");
  count->add_option("--mode", o.mode, "exact or float");
  count->add_option("--exclude", o.exclude, "Excluded component sizes (one or two)");
  count->add_flag("--verify", o.verify, "Cross-check against profile enumeration");

  auto* check = app.add_subcommand("check", "Verify the logarithmic-type conditions");
  add_common(check, o);
  check->add_option("--rho", o.rho, "Radius (defaults to the class value)");
  check->add_option("--Theta", o.Theta, "Upper constant");
  check->add_option("--theta", o.theta, "Lower constant");
  check->add_option("--theta-prime", o.theta_prime, "Constant of the Q(n) lower bound");
  check->add_option("--n0", o.n0, "Start of the partial-sum condition");
  check->add_flag("--auto", o.auto_constants, "Use suggested constants");
  check->add_option("--N", o.N, "Checked range");
  check->add_option("--condition", o.condition, "all, strong, upper, lower_sum, or q_lower");

  auto* pmf = app.add_subcommand("pmf", "Law of the number of size-j components");
  add_common(pmf, o);
  pmf->add_option("--n", o.n, "Order")->required();
  pmf->add_option("--j", o.j, "Component size")->required();
  pmf->add_option("--mode", o.mode, "exact or float");
  pmf->add_flag("--verify", o.verify, "Cross-check against profile enumeration");

  auto* moments = app.add_subcommand("moments", "Mean, variance and bounds of an additive function");
  auto* tk = app.add_subcommand("tk", "Variance bound right-hand sides and ratios");
  for (auto* cmd : {moments, tk}) {
    add_common(cmd, o);
    cmd->add_option("--n", o.n, "Order")->required();
    cmd->add_option("--family", o.family, "w, log, half, rademacher, distinct, zero, single:J");
    cmd->add_option("--seed", o.seed, "Seed of the rademacher family");
    cmd->add_option("--mode", o.mode, "exact or float");
    cmd->add_flag("--verify", o.verify, "Cross-check against profile enumeration");
  }

  auto* sweep = app.add_subcommand("sweep", "Ratio table over a range of orders");
  add_common(sweep, o);
  sweep->add_option("--n-min", o.n_min, "First order");
  sweep->add_option("--n-max,--n", o.n_max, "Last order")->required();
  sweep->add_option("--family", o.family, "w, log, half, rademacher, distinct, zero, single:J");
  sweep->add_option("--seed", o.seed, "Seed of the rademacher family");
  sweep->add_option("--mode", o.mode, "exact or float");
  sweep->add_flag("--verify", o.verify, "Cross-check rows with n <= 40 against the oracle");

  auto* sample = app.add_subcommand("sample", "Monte Carlo estimates from conditioned Poisson sampling");
  add_common(sample, o);
  sample->add_option("--n", o.n, "Order")->required();
  sample->add_option("--reps", o.reps, "Accepted samples")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 40));
  sample->add_option("--seed", o.seed, "Master seed (required)");
  sample->add_option("--family", o.family, "Additive function family");
  sample->add_option("--tilt", o.tilt, "Poisson tilt x (default: tuned)");
  sample->add_option("--streams", o.streams, "Replica streams")->check(CLI::PositiveNumber);
  sample->add_option("--max-rejections", o.max_rejections, "Rejection limit per sample");
  sample->add_option("--dump", o.dump_path, "CSV of accepted profiles (metadata in <path>.json)");

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (*classes) return cmd_classes(o, out);
    if (*count) return cmd_count(o, out, err);
    if (*check) return cmd_check(o, out, err);
    if (*pmf) return cmd_pmf(o, out, err);
    if (*moments) return cmd_report(o, out, err, true);
    if (*tk) return cmd_report(o, out, err, false);
    if (*sweep) return cmd_sweep(o, out, err);
    if (*sample) return cmd_sample(o, out, err);
  } catch (const VerificationError& e) {
    err << "error: " << e.what() << '\n';
    return kVerificationMismatch;
  } catch (const NumericError& e) {
    err << "error: " << e.what() << '\n';
    return kNumericFailure;
  } catch (const SamplerError& e) {
    err << "error: " << e.what() << " (acceptance estimate " << e.acceptance_estimate() << ")\n";
    return kNumericFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumericFailure;
  }
  return kUsageError;
}

}  // namespace kubilius::cli
