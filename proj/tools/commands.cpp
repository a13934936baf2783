#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "config.hpp"
#include "csv.hpp"
#include "spatrisk/damage_covariance.hpp"
#include "spatrisk/errors.hpp"
#include "spatrisk/risk_engine.hpp"
#include "spatrisk/simulation.hpp"
#include "spatrisk/special_functions.hpp"
#include "spatrisk/validation.hpp"

namespace spatrisk::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitValidation = 3;

void emit_table(const CsvTable& table, const std::optional<std::string>& out_path) {
  if (out_path) {
    std::ofstream os(*out_path);
    if (!os) throw ConfigError("cannot open output file: " + *out_path);
    write_csv(os, table);
  } else {
    write_csv(std::cout, table);
  }
}

int guarded(const char* command, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    std::cerr << command << ": config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << command << ": config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const numerical_error& e) {
    std::cerr << command << ": numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const resource_error& e) {
    std::cerr << command << ": numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << command << ": error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

json load_record(const CommonOptions& options, const char* command) {
  if (options.config_path.empty())
    throw ConfigError(std::string("the '") + command + "' command needs --config");
  const json root = load_config_file(options.config_path);
  return command_record(root, command);
}

QuadratureConfig quadrature_from(const json& record, const std::string& path,
                                 const CommonOptions& options) {
  QuadratureConfig quad = parse_quadrature(record, path);
  if (options.tolerance) {
    if (!(*options.tolerance > 0.0))
      throw ConfigError("--tolerance: must be positive");
    quad.abs_tol = *options.tolerance;
  }
  return quad;
}

}  // namespace

int cmd_risk(const CommonOptions& options) {
  return guarded("risk", [&] {
    const json record = load_record(options, "risk");
    const Region region = parse_region(require_key(record, "risk", "region"), "risk.region");
    const CorrelationModel model =
        parse_correlation(require_key(record, "risk", "correlation"), "risk.correlation");
    const Marginal marginal =
        record.contains("marginal")
            ? parse_marginal(record.at("marginal"), "risk.marginal")
            : Marginal{};
    const Threshold threshold =
        parse_threshold(require_key(record, "risk", "threshold"), "risk.threshold");
    const QuadratureConfig quad = quadrature_from(record, "risk", options);

    const double u_raw = threshold.raw(marginal);
    const double u0 = (u_raw - marginal.mu) / std::sqrt(marginal.sigma2);
    const RiskResult result = risk_general(region, model, marginal, u_raw, quad);

    std::printf("u0=%s\n", format_double(u0).c_str());
    std::printf("r0=%s\n", format_double(result.r0).c_str());
    std::printf("r1=%s\n", format_double(result.r1).c_str());
    std::printf("r1_quad_error=%s\n", format_double(result.r1_error).c_str());
    if (options.out_path) {
      CsvTable table;
      table.header = {"u0", "r0", "r1", "r1_quad_error"};
      table.rows.push_back({format_double(u0), format_double(result.r0),
                            format_double(result.r1), format_double(result.r1_error)});
      emit_table(table, options.out_path);
    }
    return kExitOk;
  });
}

namespace {

std::vector<CorrelationFamily> parse_families(const json& record,
                                              const std::string& path) {
  std::vector<CorrelationFamily> families(kAllFamilies.begin(), kAllFamilies.end());
  auto it = record.find("families");
  if (it == record.end()) return families;
  if (!it->is_array() || it->empty())
    throw ConfigError(path + ".families: expected a non-empty array of names");
  families.clear();
  for (const json& name : *it) {
    if (!name.is_string())
      throw ConfigError(path + ".families: expected strings");
    const auto parsed = parse_family(name.get<std::string>());
    if (!parsed)
      throw ConfigError(path + ".families: unknown correlation family '" +
                        name.get<std::string>() + "'");
    families.push_back(*parsed);
  }
  return families;
}

}  // namespace

int cmd_curve(const CommonOptions& options) {
  return guarded("curve", [&] {
    const json record = load_record(options, "curve");
    const std::string quantity = require_string(record, "curve", "quantity");
    const std::string axis = require_string(record, "curve", "axis");
    const double from = require_number(record, "curve", "from");
    const double to = require_number(record, "curve", "to");
    const auto points = static_cast<std::size_t>(uint_or(record, "curve", "points", 101));
    if (points < 2) throw ConfigError("curve.points: need at least 2");
    if (!(to > from)) throw ConfigError("curve.to: must exceed curve.from");
    const std::vector<CorrelationFamily> families = parse_families(record, "curve");
    const double theta = number_or(record, "curve", "theta", 0.5);
    const double kappa = number_or(record, "curve", "kappa", 1.0);
    const double h_fixed = number_or(record, "curve", "h", 0.3);
    const double lambda_fixed = number_or(record, "curve", "lambda", 1.0);
    if (!(theta > 0.0)) throw ConfigError("curve.theta: must be positive");
    const Region region =
        record.contains("region") ? parse_region(record.at("region"), "curve.region")
                                  : Region{RegionShape::square, 1.0, 1.0};
    const QuadratureConfig quad = quadrature_from(record, "curve", options);

    double u_fixed = norm_quantile(0.75);
    if (record.contains("u") || record.contains("p"))
      u_fixed = parse_threshold(record, "curve").raw(Marginal{});

    const bool is_g = quantity == "damage_cov";
    if (!is_g && quantity != "risk_r1")
      throw ConfigError("curve.quantity: expected 'damage_cov' or 'risk_r1'");
    if (axis != "h" && axis != "theta" && axis != "p" && axis != "lambda")
      throw ConfigError("curve.axis: expected one of h, theta, p, lambda");
    if (is_g && axis == "lambda")
      throw ConfigError("curve.axis: 'lambda' applies to risk_r1 only");
    if (!is_g && axis == "h")
      throw ConfigError("curve.axis: 'h' applies to damage_cov only");
    if (axis == "p" && !(from > 0.0 && to < 1.0))
      throw ConfigError("curve.from/to: p sweeps must stay inside (0,1)");

    CsvTable table;
    table.header = {"family", "x", "value"};
    for (CorrelationFamily family : families) {
      std::vector<double> values(points);
      for (std::size_t i = 0; i < points; ++i) {
        const double x = from + (to - from) * static_cast<double>(i) /
                                    static_cast<double>(points - 1);
        CorrelationModel model{family, theta, kappa};
        double u = u_fixed;
        double value;
        if (axis == "p") u = norm_quantile(x);
        if (is_g) {
          const double h = axis == "h" ? x : h_fixed;
          if (axis == "theta") model.theta = x;
          value = damage_cov(h, u, model);
        } else {
          if (axis == "theta") model.theta = x;
          const double lambda = axis == "lambda" ? x : lambda_fixed;
          value = risk_scaled(lambda, region, model, u, quad).r1;
        }
        values[i] = value;
        table.rows.push_back({std::string(to_string(family)), format_double(x),
                              format_double(value)});
      }
      if (!is_g && axis == "lambda") {
        // Machine-checked post-condition: r1 must be non-increasing in the
        // homothety factor for the non-negative non-increasing families.
        for (std::size_t i = 1; i < points; ++i) {
          if (values[i] > values[i - 1] + 1e-9)
            throw numerical_error(
                "curve: r1(lambda) increased for family " +
                std::string(to_string(family)) + " at x=" + format_double(values[i]));
        }
      }
    }
    emit_table(table, options.out_path);
    return kExitOk;
  });
}

int cmd_mc(const CommonOptions& options) {
  return guarded("mc", [&] {
    const json record = load_record(options, "mc");
    const std::string mode =
        record.contains("mode") ? require_string(record, "mc", "mode") : "estimate";
    const QuadratureConfig quad = quadrature_from(record, "mc", options);

    MCConfig mc;
    mc.n_points = static_cast<std::size_t>(uint_or(record, "mc", "n_points", 225));
    mc.m_reps = static_cast<std::size_t>(uint_or(record, "mc", "m_reps", 1000));
    mc.seed = uint_or(record, "mc", "seed", 1);
    mc.jitter = number_or(record, "mc", "jitter", 0.0);
    if (options.seed) mc.seed = *options.seed;
    const GridMode grid_mode = parse_grid_mode(
        record.contains("grid") ? require_string(record, "mc", "grid")
                                : "stratified-jittered",
        "mc.grid");

    if (mode == "estimate") {
      const Region region =
          parse_region(require_key(record, "mc", "region"), "mc.region");
      const CorrelationModel model = parse_correlation(
          require_key(record, "mc", "correlation"), "mc.correlation");
      const Threshold threshold =
          parse_threshold(require_key(record, "mc", "threshold"), "mc.threshold");
      const double u = threshold.raw(Marginal{});

      const Rng root(mc.seed);
      Rng grid_rng = root.substream(0);
      const Grid grid =
          build_grid(region, mc.n_points, grid_mode, grid_rng, mc.max_grid_points);
      const FieldSampler sampler(grid, model, mc.jitter);
      const std::vector<double> losses =
          loss_series(sampler, mc.m_reps, root.substream(1), u, options.threads);
      const M1Result m1 = m1_from_losses(losses);
      const RiskResult ref = risk_standard(region, model, u, quad);

      std::printf("u0=%s\n", format_double(u).c_str());
      std::printf("r0_hat=%s\n", format_double(m1.r0_hat).c_str());
      std::printf("r1_hat=%s\n", format_double(m1.r1_hat).c_str());
      std::printf("stderr_r1=%s\n", format_double(m1.stderr_r1).c_str());
      std::printf("r0_quad=%s\n", format_double(ref.r0).c_str());
      std::printf("r1_quad=%s\n", format_double(ref.r1).c_str());
      if (options.out_path) {
        CsvTable table;
        table.header = {"u0", "r0_hat", "r1_hat", "stderr_r1", "r0_quad", "r1_quad"};
        table.rows.push_back({format_double(u), format_double(m1.r0_hat),
                              format_double(m1.r1_hat), format_double(m1.stderr_r1),
                              format_double(ref.r0), format_double(ref.r1)});
        emit_table(table, options.out_path);
      }
      return kExitOk;
    }

    if (mode != "study")
      throw ConfigError("mc.mode: expected 'estimate' or 'study'");

    StudyConfig study;
    study.mc = mc;
    study.mode = grid_mode;
    study.quad = quad;
    study.theta = number_or(record, "mc", "theta", 0.5);
    study.matern_kappa = number_or(record, "mc", "kappa", 1.0);
    study.runs = static_cast<int>(uint_or(record, "mc", "runs", 100));
    study.families = parse_families(record, "mc");
    if (record.contains("region"))
      study.region = parse_region(record.at("region"), "mc.region");
    if (record.contains("probs")) {
      const json& probs = record.at("probs");
      if (!probs.is_array() || probs.empty())
        throw ConfigError("mc.probs: expected a non-empty array");
      study.probs.clear();
      for (const json& p : probs) {
        if (!p.is_number() || !(p.get<double>() > 0.0 && p.get<double>() < 1.0))
          throw ConfigError("mc.probs: entries must lie in (0,1)");
        study.probs.push_back(p.get<double>());
      }
    }

    const std::vector<StudyRow> rows = relative_error_study(study, options.threads);
    CsvTable table;
    table.header = {"family", "p", "run_index", "r1_mc", "r1_quad", "rel_error"};
    for (const StudyRow& row : rows)
      table.rows.push_back({std::string(to_string(row.family)), format_double(row.p),
                            std::to_string(row.run), format_double(row.r1_mc),
                            format_double(row.r1_quad), format_double(row.rel_error)});
    emit_table(table, options.out_path);
    return kExitOk;
  });
}

int cmd_validate(const CommonOptions& options, bool inject_failure) {
  return guarded("validate", [&] {
    validation::ValidateOptions vopts;
    vopts.seed = options.seed.value_or(1);
    vopts.threads = options.threads;
    vopts.inject_failure = inject_failure;
    const auto checks = validation::run_all(vopts);
    const std::string report = validation::format_report(checks, vopts.seed);
    if (options.out_path) {
      std::ofstream os(*options.out_path);
      if (!os) throw ConfigError("cannot open output file: " + *options.out_path);
      os << report;
    }
    std::cout << report;
    return validation::all_passed(checks) ? kExitOk : kExitValidation;
  });
}

int cmd_piemonte(const CommonOptions& options) {
  return guarded("piemonte", [&] {
    // PM10 winter-season case study: log-concentrations fitted by an
    // isotropic Gaussian process with a Matern correlation.
    const Region region{RegionShape::square, 10.0, 1.0};
    const CorrelationModel model{CorrelationFamily::matern, 100.0, 1.0};
    const Marginal marginal{3.69, 1.2762};
    const double legal_level = 50.0;
    const double u_raw = std::log(legal_level);
    const double sigma = std::sqrt(marginal.sigma2);
    const double u0 = (u_raw - marginal.mu) / sigma;

    QuadratureConfig quad;
    if (options.tolerance) quad.abs_tol = *options.tolerance;
    const RiskResult result = risk_general(region, model, marginal, u_raw, quad);

    MCConfig mc;
    mc.n_points = 225;
    mc.m_reps = 2000;
    mc.seed = options.seed.value_or(1);
    const Rng root(mc.seed);
    Rng grid_rng = root.substream(0);
    const Grid grid = build_grid(region, mc.n_points, GridMode::stratified_jittered,
                                 grid_rng, mc.max_grid_points);
    const FieldSampler sampler(grid, model, mc.jitter);
    const std::vector<double> losses =
        loss_series(sampler, mc.m_reps, root.substream(1), u0, options.threads);
    const M1Result m1 = m1_from_losses(losses);
    const double r1_mc = marginal.sigma2 * m1.r1_hat;
    const double r1_mc_se = marginal.sigma2 * m1.stderr_r1;

    std::printf("threshold: legal level %g, log scale u=%s\n", legal_level,
                format_double(u_raw).c_str());
    std::printf("u0=%s          (published reference 0.1965)\n",
                format_double(u0).c_str());
    std::printf("r0=%s  (published reference 0.3483621)\n",
                format_double(result.r0).c_str());
    std::printf("r1=%s  (published reference 0.4119461)\n",
                format_double(result.r1).c_str());
    std::printf("r1_quad_error=%s\n", format_double(result.r1_error).c_str());
    std::printf("r1_mc=%s +- %s (3 sigma, n=%zu, m=%zu, seed=%llu)\n",
                format_double(r1_mc).c_str(), format_double(3.0 * r1_mc_se).c_str(),
                mc.n_points, mc.m_reps,
                static_cast<unsigned long long>(mc.seed));
    const bool agree = std::fabs(r1_mc - result.r1) <= 3.0 * r1_mc_se;
    std::printf("quadrature vs monte carlo: %s\n",
                agree ? "agree within 3 sigma" : "DISAGREE beyond 3 sigma");
    return agree ? kExitOk : kExitNumerical;
  });
}

}  // namespace spatrisk::cli
