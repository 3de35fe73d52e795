#include "edgeworth_cli/commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <mutex>
#include <thread>

#include "edgeworth/cumulants.hpp"
#include "edgeworth/error.hpp"
#include "edgeworth_cli/delta_file.hpp"

#ifndef EDGEWORTH_VERSION
#define EDGEWORTH_VERSION "0.0.0"
#endif

namespace edgeworth::cli {

std::string tool_version() { return std::string("edgeworth ") + EDGEWORTH_VERSION; }

namespace {

/// Runs body(i) for i in [0, count) on up to `threads` workers; each index is
/// owned by exactly one worker so results land in fixed slots.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
  threads = static_cast<unsigned>(std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(count, 1)));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t i = t; i < count; i += threads) body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

double window_loss_oracle(const EdgeworthModel& model, double alpha, double tol) {
  return quadrature([&](double t) { return (alpha - t) * density_expansion(model, t); }, 0.0,
                    alpha, tol)
      .value;
}

/// Exact semi-hard loss of a reference law by quadrature over its support in [0, alpha].
double exact_loss(const ReferenceDistribution& law, double alpha, double tol) {
  double lo = 0.0;
  if (const auto* g = std::get_if<ShiftedGammaLaw>(&law.law())) lo = std::max(lo, g->shift);
  if (lo >= alpha) return 0.0;
  return quadrature([&](double t) { return (alpha - t) * exact_density(law, t); }, lo, alpha, tol)
      .value;
}

void check_grid(const std::vector<double>& alphas, const std::vector<std::uint64_t>& n_grid) {
  if (alphas.empty()) throw UsageError("at least one --alpha value is required");
  for (double a : alphas) {
    if (!std::isfinite(a) || !(a > 0.0)) {
      throw UsageError("every --alpha must be positive and finite, got " + format_double(a));
    }
  }
  if (n_grid.empty()) throw UsageError("at least one --n value is required");
  for (auto n : n_grid) {
    if (n < 1) throw UsageError("every --n must be at least 1");
  }
}

SweepRow expansion_row(const EdgeworthModel& model, double alpha) {
  const auto e = loss_expansion(model, alpha);
  SweepRow row;
  row.alpha = alpha;
  row.n_eff = model.n_eff();
  row.leading = e.leading;
  row.correction = e.correction;
  row.total = e.total;
  row.p_sh = semi_hard_probability(model, alpha);
  row.sensitivity = margin_sensitivity(model, alpha);
  return row;
}

void add_model_metadata(SweepReport& r, double mean, double sigma, double skewness,
                        Convention convention) {
  r.add_metadata("model.mean", format_double(mean));
  r.add_metadata("model.sigma", format_double(sigma));
  r.add_metadata("model.skewness", format_double(skewness));
  r.add_metadata("convention", std::string(to_string(convention)));
}

void emit(const std::string& path, const std::function<void(std::ostream&)>& body,
          std::ostream& out) {
  if (path.empty() || path == "-") {
    body(out);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorKind::Parse, "cannot open '" + path + "' for writing");
  body(file);
  if (!file) throw Error(ErrorKind::Parse, "failed writing '" + path + "'");
}

void emit_report(const SweepReport& report, const std::string& format, const std::string& path,
                 std::ostream& out) {
  emit(path, [&](std::ostream& os) { format == "json" ? write_json(report, os) : write_csv(report, os); },
       out);
}

}  // namespace

SweepReport expand(const ExpandOptions& options) {
  check_grid(options.alphas, options.n_grid);
  if (!std::isfinite(options.model.sigma) || !(options.model.sigma > 0.0)) {
    throw UsageError("--sigma must be positive");
  }
  if (!std::isfinite(options.model.mean) || !std::isfinite(options.model.skewness)) {
    throw UsageError("--mean and --skewness must be finite");
  }

  SweepReport report;
  report.add_metadata("tool", tool_version());
  report.add_metadata("command", "expand");
  report.add_metadata("model.source", options.model_source);
  add_model_metadata(report, options.model.mean, options.model.sigma, options.model.skewness,
                     options.model.convention);
  report.add_metadata("seed", std::to_string(options.seed));
  if (options.with_oracle) report.add_metadata("oracle.tol", format_double(options.tol));

  std::vector<double> alphas = options.alphas;
  std::vector<std::uint64_t> ns = options.n_grid;
  std::sort(alphas.begin(), alphas.end());
  alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());

  report.rows.resize(alphas.size() * ns.size());
  std::vector<char> negative(report.rows.size(), 0);
  parallel_for(report.rows.size(), options.threads, [&](std::size_t i) {
    const double alpha = alphas[i / ns.size()];
    const EdgeworthModel model(options.model.mean, options.model.sigma, options.model.skewness,
                               ns[i % ns.size()], options.model.convention);
    SweepRow row = expansion_row(model, alpha);
    if (options.with_oracle) {
      row.oracle_value = window_loss_oracle(model, alpha, options.tol);
      row.abs_error = std::abs(row.total - *row.oracle_value);
    }
    negative[i] = density_negative_on_window(model, alpha) ? 1 : 0;
    report.rows[i] = row;
  });
  report.sort_rows();

  const auto flagged = std::count(negative.begin(), negative.end(), 1);
  if (flagged > 0) {
    report.add_metadata("warning", "edgeworth density negative on the window in " +
                                       std::to_string(flagged) + " row(s)");
  }
  return report;
}

ValidationResult validate(const ValidateOptions& options) {
  check_grid({options.alpha}, options.n_grid);
  if (options.n_grid.size() < 3) throw UsageError("validate needs at least 3 values of --n");
  // Throws UnsupportedFamily for mixtures before any work is done.
  standardized_batch_law(options.reference, 1);

  const auto& ref = options.reference;
  const double mean = ref.mean();
  const double sigma = std::sqrt(ref.variance());
  const double skewness = ref.skewness();

  ValidationResult result;
  auto& report = result.report;
  report.add_metadata("tool", tool_version());
  report.add_metadata("command", "validate");
  report.add_metadata("reference", ref.describe());
  report.add_metadata("exact_law", "mean + sqrt(N) (batch_mean_N - mean)");
  add_model_metadata(report, mean, sigma, skewness, options.convention);
  report.add_metadata("alpha", format_double(options.alpha));
  report.add_metadata("tol", format_double(options.tol));
  report.add_metadata("seed", std::to_string(options.seed));

  std::vector<std::uint64_t> ns = options.n_grid;
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());

  report.rows.resize(ns.size());
  parallel_for(ns.size(), options.threads, [&](std::size_t i) {
    const EdgeworthModel model(mean, sigma, skewness, ns[i], options.convention);
    SweepRow row = expansion_row(model, options.alpha);
    row.oracle_value = exact_loss(standardized_batch_law(ref, ns[i]), options.alpha, options.tol);
    row.abs_error = std::abs(row.total - *row.oracle_value);
    report.rows[i] = row;
  });
  report.sort_rows();

  const double floor = 10.0 * options.tol;
  const bool at_floor = std::any_of(report.rows.begin(), report.rows.end(),
                                    [&](const SweepRow& r) { return *r.abs_error <= floor; });
  if (at_floor) {
    result.fit_status = "skipped: errors at quadrature tolerance";
  } else {
    std::vector<ScalingPoint> points;
    for (const auto& r : report.rows) points.push_back({r.n_eff, *r.abs_error});
    result.fit = error_scaling_fit(points);
    result.fit_status = "ok";
  }

  report.add_metadata("fit.status", result.fit_status);
  if (result.fit) {
    report.add_metadata("fit.slope", format_double(result.fit->slope));
    report.add_metadata("fit.intercept", format_double(result.fit->intercept));
    report.add_metadata("fit.r_squared", format_double(result.fit->r_squared));
    report.add_metadata("fit.c_estimate", format_double(result.fit->c_estimate()));
  }
  return result;
}

Recommendation recommend(const EdgeworthModel& model, double alpha, double epsilon,
                         double c_estimate, std::string c_source) {
  Recommendation rec;
  rec.batch_size = recommend_batch_size(model, alpha, epsilon, c_estimate);
  rec.c_estimate = c_estimate;
  rec.c_source = std::move(c_source);
  rec.loss_total = loss_expansion(model, alpha).total;
  rec.correction_free = model.skewness() == 0.0;
  return rec;
}

double c_estimate_from_report(const SweepReport& report) {
  const std::string* c = report.find_metadata("fit.c_estimate");
  if (c == nullptr) {
    throw Error(ErrorKind::Parse, "report has no fit.c_estimate (was it produced by validate?)");
  }
  return parse_double(*c);
}

namespace {

struct ReferenceFlags {
  std::string family = "gamma";
  double ref_mean = 0.0;
  double ref_sigma = 1.0;
  double shape = 4.0;
  double scale = 1.0;
  double shift = 0.0;
  double weight = 0.5;
  double mean1 = -1.0;
  double sigma1 = 1.0;
  double mean2 = 1.0;
  double sigma2 = 1.0;

  void attach(CLI::App* app) {
    app->add_option("--family", family, "Reference family: normal, gamma or mixture")
        ->check(CLI::IsMember({"normal", "gamma", "mixture"}))
        ->capture_default_str();
    app->add_option("--ref-mean", ref_mean, "Normal reference mean")->capture_default_str();
    app->add_option("--ref-sigma", ref_sigma, "Normal reference sigma")->capture_default_str();
    app->add_option("--shape", shape, "Gamma shape")->capture_default_str();
    app->add_option("--scale", scale, "Gamma scale")->capture_default_str();
    app->add_option("--shift", shift, "Gamma shift")->capture_default_str();
    app->add_option("--weight", weight, "Mixture weight of component 1")->capture_default_str();
    app->add_option("--mean1", mean1, "Mixture component 1 mean")->capture_default_str();
    app->add_option("--sigma1", sigma1, "Mixture component 1 sigma")->capture_default_str();
    app->add_option("--mean2", mean2, "Mixture component 2 mean")->capture_default_str();
    app->add_option("--sigma2", sigma2, "Mixture component 2 sigma")->capture_default_str();
  }

  ReferenceDistribution build() const {
    try {
      if (family == "normal") return ReferenceDistribution::normal(ref_mean, ref_sigma);
      if (family == "gamma") return ReferenceDistribution::shifted_gamma(shape, scale, shift);
      return ReferenceDistribution::normal_mixture(weight, mean1, sigma1, mean2, sigma2);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }
};

void print_kv(std::ostream& os, const std::string& key, const std::string& value) {
  os << key << '=' << value << '\n';
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Edgeworth expansion of the semi-hard triplet loss", "edgeworth"};
  app.set_config("--config", "", "key=value configuration file (flags override it)");
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);

  // fit
  std::string fit_input;
  std::string fit_format = "kv";
  auto* fit_cmd = app.add_subcommand("fit", "Estimate mean, k-statistics and skewness of a Delta file");
  fit_cmd->add_option("input", fit_input, "Delta file (one value per line, '-' for stdin)")->required();
  fit_cmd->add_option("--format", fit_format, "kv or json")
      ->check(CLI::IsMember({"kv", "json"}))
      ->capture_default_str();

  // expand
  ExpandOptions ex;
  std::string ex_convention = "cdf-consistent";
  std::string ex_from_file, ex_output, ex_format = "csv";
  auto* expand_cmd = app.add_subcommand("expand", "Tabulate the loss expansion over an (alpha, N) grid");
  expand_cmd->add_option("--mean", ex.model.mean, "Mean of Delta")->capture_default_str();
  expand_cmd->add_option("--sigma", ex.model.sigma, "Standard deviation of Delta")->capture_default_str();
  expand_cmd->add_option("--skewness", ex.model.skewness, "Skewness of Delta")->capture_default_str();
  auto* from_file_opt = expand_cmd->add_option("--from-file", ex_from_file,
                                               "Fit the model to a Delta file instead");
  expand_cmd->add_option("--alpha", ex.alphas, "Margins (comma separated)")->delimiter(',')->required();
  expand_cmd->add_option("--n", ex.n_grid, "Effective batch sizes (comma separated)")->delimiter(',')->required();
  expand_cmd->add_option("--convention", ex_convention, "cdf-consistent or subtractive-he3")
      ->check(CLI::IsMember({"cdf-consistent", "subtractive-he3"}))
      ->capture_default_str();
  expand_cmd->add_flag("--oracle", ex.with_oracle, "Add quadrature oracle columns");
  expand_cmd->add_option("--tol", ex.tol, "Quadrature tolerance")->capture_default_str();
  expand_cmd->add_option("--seed", ex.seed, "Seed recorded in metadata")->envname("EDGEWORTH_SEED")->capture_default_str();
  expand_cmd->add_option("--threads", ex.threads, "Worker threads")->capture_default_str();
  expand_cmd->add_option("--output,-o", ex_output, "Output file (default stdout)");
  expand_cmd->add_option("--format", ex_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  from_file_opt->excludes(expand_cmd->get_option("--mean"), expand_cmd->get_option("--sigma"),
                          expand_cmd->get_option("--skewness"));

  // simulate
  ClusterTripletConfig sim;
  std::string sim_distance = "euclidean";
  std::string sim_output;
  unsigned sim_threads = 1;
  auto* sim_cmd = app.add_subcommand("simulate", "Simulate Delta for two Gaussian clusters");
  sim_cmd->add_option("--dimension", sim.dimension, "Embedding dimension")->capture_default_str();
  sim_cmd->add_option("--separation", sim.center_separation, "Distance between cluster centers")->capture_default_str();
  sim_cmd->add_option("--within-sigma", sim.within_sigma, "Within-cluster standard deviation")->capture_default_str();
  sim_cmd->add_option("--distance", sim_distance, "euclidean or squared-euclidean")
      ->check(CLI::IsMember({"euclidean", "squared-euclidean"}))
      ->capture_default_str();
  sim_cmd->add_option("--n-triplets", sim.n_triplets, "Number of triplets")->capture_default_str();
  sim_cmd->add_option("--seed", sim.seed, "Random seed")->envname("EDGEWORTH_SEED")->capture_default_str();
  sim_cmd->add_option("--threads", sim_threads, "Worker threads")->capture_default_str();
  sim_cmd->add_option("--output,-o", sim_output, "Output file (default stdout)");

  // validate
  ValidateOptions val;
  ReferenceFlags val_ref;
  std::string val_convention = "cdf-consistent", val_output, val_format = "csv";
  auto* val_cmd = app.add_subcommand("validate", "Compare the expansion with exact batch-mean losses");
  val_ref.attach(val_cmd);
  val_cmd->add_option("--alpha", val.alpha, "Margin")->capture_default_str();
  val_cmd->add_option("--n", val.n_grid, "Batch sizes (comma separated)")->delimiter(',')->capture_default_str();
  val_cmd->add_option("--convention", val_convention, "cdf-consistent or subtractive-he3")
      ->check(CLI::IsMember({"cdf-consistent", "subtractive-he3"}))
      ->capture_default_str();
  val_cmd->add_option("--tol", val.tol, "Quadrature tolerance")->capture_default_str();
  val_cmd->add_option("--seed", val.seed, "Seed recorded in metadata")->envname("EDGEWORTH_SEED")->capture_default_str();
  val_cmd->add_option("--threads", val.threads, "Worker threads")->capture_default_str();
  val_cmd->add_option("--output,-o", val_output, "Output file (default stdout)");
  val_cmd->add_option("--format", val_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  // recommend
  ModelParams rec_model;
  std::uint64_t rec_n = 1;
  std::string rec_convention = "cdf-consistent", rec_report;
  double rec_alpha = 0.0, rec_epsilon = 0.0, rec_c = 0.0;
  ValidateOptions rec_val;
  ReferenceFlags rec_ref;
  auto* rec_cmd = app.add_subcommand("recommend", "Smallest batch size meeting a relative-error target");
  rec_cmd->add_option("--mean", rec_model.mean, "Mean of Delta")->capture_default_str();
  rec_cmd->add_option("--sigma", rec_model.sigma, "Standard deviation of Delta")->capture_default_str();
  rec_cmd->add_option("--skewness", rec_model.skewness, "Skewness of Delta")->capture_default_str();
  rec_cmd->add_option("--n", rec_n, "Effective batch size of the model")->capture_default_str();
  rec_cmd->add_option("--convention", rec_convention, "cdf-consistent or subtractive-he3")
      ->check(CLI::IsMember({"cdf-consistent", "subtractive-he3"}))
      ->capture_default_str();
  rec_cmd->add_option("--alpha", rec_alpha, "Margin")->required();
  rec_cmd->add_option("--epsilon", rec_epsilon, "Relative error target")->required();
  auto* c_opt = rec_cmd->add_option("--c", rec_c, "Remainder constant C");
  auto* report_opt = rec_cmd->add_option("--from-report", rec_report, "Read C from a validate report (CSV)");
  c_opt->excludes(report_opt);
  rec_ref.attach(rec_cmd);
  rec_cmd->add_option("--validate-n", rec_val.n_grid, "Batch sizes for an inline validate run")
      ->delimiter(',')
      ->capture_default_str();
  rec_cmd->add_option("--tol", rec_val.tol, "Quadrature tolerance for an inline validate run")->capture_default_str();

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.emplace_back("edgeworth");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*fit_cmd) {
      DeltaSample s;
      if (fit_input == "-") {
        s = read_delta_stream(std::cin, "stdin");
      } else {
        s = read_delta_file(fit_input);
      }
      const auto summary = estimate_cumulants(s);
      if (fit_format == "json") {
        nlohmann::ordered_json doc;
        doc["source"] = s.source_tag;
        doc["n_samples"] = summary.n_samples;
        doc["mean"] = summary.mean;
        doc["variance"] = summary.variance;
        doc["kappa3"] = summary.kappa3;
        doc["skewness"] = summary.skewness;
        out << doc.dump(2) << '\n';
      } else {
        print_kv(out, "source", s.source_tag);
        print_kv(out, "n_samples", std::to_string(summary.n_samples));
        print_kv(out, "mean", format_double(summary.mean));
        print_kv(out, "variance", format_double(summary.variance));
        print_kv(out, "kappa3", format_double(summary.kappa3));
        print_kv(out, "skewness", format_double(summary.skewness));
      }
      return kExitOk;
    }

    if (*expand_cmd) {
      ex.model.convention = parse_convention(ex_convention);
      if (!ex_from_file.empty()) {
        const auto summary = estimate_cumulants(read_delta_file(ex_from_file));
        ex.model.mean = summary.mean;
        ex.model.sigma = std::sqrt(summary.variance);
        ex.model.skewness = summary.skewness;
        ex.model_source = ex_from_file;
      }
      const auto report = expand(ex);
      if (const auto* w = report.find_metadata("warning")) err << "warning: " << *w << '\n';
      emit_report(report, ex_format, ex_output, out);
      return kExitOk;
    }

    if (*sim_cmd) {
      sim.distance = parse_distance(sim_distance);
      if (sim.n_triplets < kMinCumulantSamples) throw UsageError("--n-triplets must be at least 4");
      if (sim.dimension < 1) throw UsageError("--dimension must be at least 1");
      if (!(sim.within_sigma > 0.0)) throw UsageError("--within-sigma must be positive");
      if (!(sim.center_separation >= 0.0)) throw UsageError("--separation must be non-negative");
      const auto sample = simulate_triplets(sim, sim_threads);
      emit(sim_output, [&](std::ostream& os) { write_delta_stream(sample, os); }, out);
      return kExitOk;
    }

    if (*val_cmd) {
      val.reference = val_ref.build();
      val.convention = parse_convention(val_convention);
      const auto result = validate(val);
      emit_report(result.report, val_format, val_output, out);
      if (result.fit) {
        err << "fit: slope=" << format_double(result.fit->slope)
            << " r2=" << format_double(result.fit->r_squared)
            << " C=" << format_double(result.fit->c_estimate()) << '\n';
      } else {
        err << "fit: " << result.fit_status << '\n';
      }
      return kExitOk;
    }

    if (*rec_cmd) {
      const EdgeworthModel model(rec_model.mean, rec_model.sigma, rec_model.skewness, rec_n,
                                 parse_convention(rec_convention));
      double c = 0.0;
      std::string source;
      if (c_opt->count() > 0) {
        c = rec_c;
        source = "flag";
      } else if (report_opt->count() > 0) {
        std::ifstream in(rec_report);
        if (!in) throw Error(ErrorKind::Parse, "cannot open '" + rec_report + "' for reading");
        c = c_estimate_from_report(read_csv(in));
        source = "report:" + rec_report;
      } else {
        rec_val.reference = rec_ref.build();
        rec_val.alpha = rec_alpha;
        rec_val.convention = model.convention();
        const auto result = validate(rec_val);
        if (!result.fit) {
          throw Error(ErrorKind::Domain,
                      "inline validate produced no scaling fit (" + result.fit_status +
                          "); pass --c explicitly");
        }
        c = result.fit->c_estimate();
        source = "inline-validate:" + rec_val.reference.describe();
      }
      const auto rec = recommend(model, rec_alpha, rec_epsilon, c, source);
      print_kv(out, "recommended_n", std::to_string(rec.batch_size));
      print_kv(out, "c_estimate", format_double(rec.c_estimate));
      print_kv(out, "c_source", rec.c_source);
      print_kv(out, "epsilon", format_double(rec_epsilon));
      print_kv(out, "alpha", format_double(rec_alpha));
      print_kv(out, "loss_total", format_double(rec.loss_total));
      if (rec.correction_free) {
        print_kv(out, "note", "zero skewness: first-order correction vanishes, "
                              "recommendation driven purely by the measured remainder");
      }
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace edgeworth::cli
