//
// Copyright 2026 The tprivacy Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <utility>

#include <Eigen/LU>

#include "tprivacy/asymptotics.hpp"
#include "tprivacy/bayes_abc.hpp"
#include "tprivacy/error.hpp"
#include "tprivacy/mcem.hpp"
#include "tprivacy/mechanisms.hpp"
#include "tprivacy/metrics.hpp"
#include "tprivacy/naive_fit.hpp"
#include "tprivacy/simulate.hpp"

namespace tprivacy::cli {

std::uint64_t Context::seed() const {
  if (!globals.seed) throw CLI::RequiredError("--seed");
  return *globals.seed;
}

namespace {

std::string render(Json doc) { return doc.dump(2) + "\n"; }

Json document(const Context& ctx) {
  Json doc;
  doc["meta"] = meta_json(ctx.meta);
  return doc;
}

std::string count(std::size_t n) { return std::to_string(n); }

// Type-7 quantile of an already sorted sample.
double quantile_sorted(const std::vector<double>& sorted, double p) {
  const double h = (static_cast<double>(sorted.size()) - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

void add_model(CLI::App* app, RegressionParams& p) {
  app->add_option("--beta0", p.beta0, "Intercept of the confidential regression");
  app->add_option("--beta1", p.beta1, "Slope of the confidential regression");
  app->add_option("--sigma", p.sigma, "Regression error standard deviation");
  app->add_option("--lambda", p.lambda, "Poisson mean of the regressor");
}

struct DataOptions {
  RegressionParams model;
  double epsilon_x = 1;
  double epsilon_y = 1;
  std::size_t n = 10;
  std::string input;
};

void add_budgets(CLI::App* app, DataOptions& d) {
  app->add_option("--epsilon-x", d.epsilon_x, "Privacy loss budget spent on x");
  app->add_option("--epsilon-y", d.epsilon_y, "Privacy loss budget spent on y");
}

void add_data(CLI::App* app, DataOptions& d) {
  add_model(app, d.model);
  add_budgets(app, d);
  app->add_option("--n", d.n, "Records to simulate when no --input is given");
  app->add_option("--input", d.input,
                  "Released data (CSV with x_tilde,y_tilde columns, or simulate JSON)");
}

struct Simulated {
  ConfidentialDataset confidential;
  PrivatizedDataset release;
};

Simulated simulate_data(const DataOptions& d, const Stream& root) {
  Stream conf_rng = root.child("confidential");
  Simulated out;
  out.confidential = gen_confidential(d.n, d.model, conf_rng);
  Stream release_rng = root.child("release");
  out.release = privatize_dataset(out.confidential, PrivacyBudget(d.epsilon_x),
                                  PrivacyBudget(d.epsilon_y), release_rng);
  return out;
}

PrivatizedDataset load_release(const DataOptions& d, const Context& ctx) {
  if (d.input.empty()) return simulate_data(d, Stream(ctx.seed())).release;
  auto cols = read_release(d.input);
  PrivatizedDataset data;
  data.x_tilde = std::move(cols.x_tilde);
  data.y_tilde = std::move(cols.y_tilde);
  data.spec_x = MechanismSpec::make(Family::laplace, 1.0, d.epsilon_x);
  data.spec_y = MechanismSpec::make(Family::laplace, 1.0, d.epsilon_y);
  data.validate();
  return data;
}

struct McemOptions {
  MCEMConfig config;
  std::string weighting = "per-record";
};

void add_mcem(CLI::App* app, McemOptions& m) {
  app->add_option("--k-samples", m.config.k_samples, "Importance samples per E-step");
  app->add_option("--max-iter", m.config.max_iter, "Maximum EM iterations");
  app->add_option("--tol", m.config.tol, "Stopping tolerance on the parameter change");
  app->add_option("--ess-floor", m.config.ess_floor,
                  "ESS fraction below which K is doubled once");
  app->add_option("--alpha", m.config.alpha, "Ellipse miscoverage level");
  app->add_option("--weighting", m.weighting, "Importance weighting scheme")
      ->check(CLI::IsMember({"per-record", "joint"}));
}

MCEMConfig mcem_config(const McemOptions& m, const RegressionParams& model) {
  MCEMConfig c = m.config;
  c.sigma = model.sigma;
  c.lambda = model.lambda;
  c.weighting = parse_weighting(m.weighting);
  return c;
}

struct DesignOptions {
  double beta0 = 0;
  double beta1 = 0.5;
  double sigma = 1;
  std::vector<double> sigma_u{0, 0.25, 0.5, 0.75, 1, 1.25, 1.5, 1.75, 2};
  std::vector<double> sigma_v{0, 0.25, 0.5, 0.75, 1, 1.25, 1.5, 1.75, 2};
  double alpha = 0.05;
  std::size_t design_n = kReferenceDesignSize;
  std::uint64_t design_seed = kReferenceDesignSeed;
  double design_variance = kReferenceDesignVariance;
};

void add_design(CLI::App* app, DesignOptions& d) {
  app->add_option("--beta1", d.beta1, "True slope");
  app->add_option("--sigma", d.sigma, "Regression error standard deviation");
  app->add_option("--sigma-u", d.sigma_u, "Noise standard deviations on x")
      ->delimiter(',');
  app->add_option("--sigma-v", d.sigma_v, "Noise standard deviations on y")
      ->delimiter(',');
  app->add_option("--alpha", d.alpha, "Miscoverage level");
  app->add_option("--design-n", d.design_n, "Size of the fixed design");
  app->add_option("--design-seed", d.design_seed, "Seed of the fixed design");
  app->add_option("--design-variance", d.design_variance,
                  "Sample variance the design is rescaled to");
}

std::vector<double> make_design(const DesignOptions& d) {
  Stream rng(d.design_seed);
  return standardized_design(rng, d.design_n, d.design_variance);
}

// ---------------------------------------------------------------- privatize

Command privatize_command(CLI::App& root) {
  struct Opts {
    std::vector<double> values;
    std::string input;
    std::string family = "laplace";
    double epsilon = 1;
    double sensitivity = 1;
  };
  auto o = std::make_shared<Opts>();
  auto* app = root.add_subcommand("privatize", "Release a vector through a mechanism");
  auto* values = app->add_option("--values", o->values, "Comma-separated values")
                     ->delimiter(',');
  app->add_option("--input", o->input, "File with one value per line")->excludes(values);
  app->add_option("--family", o->family,
                  "laplace, double-geometric or randomized-response");
  app->add_option("--epsilon", o->epsilon, "Privacy loss budget");
  app->add_option("--sensitivity", o->sensitivity, "Global sensitivity");
  return {app, [o](const Context& ctx) {
            const auto spec =
                MechanismSpec::make(parse_family(o->family), o->sensitivity, o->epsilon);
            const auto values = o->input.empty() ? o->values : read_values(o->input);
            require(!values.empty(), "no values given; pass --values or --input");
            Stream rng = Stream(ctx.seed()).child("privatize");
            const auto release = privatize_vector(values, spec, rng);
            if (ctx.json()) {
              Json doc = document(ctx);
              doc["mechanism"] = to_json(spec);
              doc["released"] = release.values;
              return render(doc);
            }
            Csv csv(ctx.meta);
            csv.header({"index", "released"});
            for (std::size_t i = 0; i < release.values.size(); ++i) {
              csv.row({count(i), number(release.values[i])});
            }
            return csv.str();
          }};
}

// ----------------------------------------------------------------- simulate

Command simulate_command(CLI::App& root) {
  struct Opts {
    DataOptions data;
    std::string emit = "release";
  };
  auto o = std::make_shared<Opts>();
  auto* app = root.add_subcommand("simulate", "Generate and privatize a regression dataset");
  add_model(app, o->data.model);
  add_budgets(app, o->data);
  app->add_option("--n", o->data.n, "Records to generate");
  app->add_option("--emit", o->emit, "Columns to write")
      ->check(CLI::IsMember({"release", "confidential", "both"}));
  return {app, [o](const Context& ctx) {
            const auto sim = simulate_data(o->data, Stream(ctx.seed()));
            const bool rel = o->emit != "confidential";
            const bool conf = o->emit != "release";
            const auto& c = sim.confidential;
            const auto& r = sim.release;
            if (ctx.json()) {
              Json doc = document(ctx);
              doc["spec_x"] = to_json(r.spec_x);
              doc["spec_y"] = to_json(r.spec_y);
              Json records = Json::array();
              for (std::size_t i = 0; i < r.size(); ++i) {
                Json rec;
                rec["index"] = i;
                if (conf) {
                  rec["x"] = c.x[i];
                  rec["y"] = c.y[i];
                }
                if (rel) {
                  rec["x_tilde"] = r.x_tilde[i];
                  rec["y_tilde"] = r.y_tilde[i];
                }
                records.push_back(std::move(rec));
              }
              doc["records"] = std::move(records);
              return render(doc);
            }
            Csv csv(ctx.meta);
            std::vector<std::string> head{"index"};
            if (conf) head.insert(head.end(), {"x", "y"});
            if (rel) head.insert(head.end(), {"x_tilde", "y_tilde"});
            csv.header(head);
            for (std::size_t i = 0; i < r.size(); ++i) {
              std::vector<std::string> row{count(i)};
              if (conf) row.insert(row.end(), {std::to_string(c.x[i]), number(c.y[i])});
              if (rel) row.insert(row.end(), {number(r.x_tilde[i]), number(r.y_tilde[i])});
              csv.row(row);
            }
            return csv.str();
          }};
}

// ---------------------------------------------------------------- fit-naive

std::vector<std::string> fit_row(const FitResult& f) {
  return {std::string(method_name(f.method)), count(f.n), number(f.beta0),
          number(f.beta1), number(f.covariance(0, 0)), number(f.covariance(0, 1)),
          number(f.covariance(1, 1)), number(f.residual_variance)};
}

const std::vector<std::string> kFitColumns{"method", "n", "beta0", "beta1", "cov00",
                                           "cov01", "cov11", "residual_variance"};

Command fit_naive_command(CLI::App& root) {
  auto o = std::make_shared<DataOptions>();
  auto* app = root.add_subcommand(
      "fit-naive", "Ordinary least squares on the released data, ignoring the noise");
  add_data(app, *o);
  return {app, [o](const Context& ctx) {
            const auto data = load_release(*o, ctx);
            const auto fit = ols(data.x_tilde, data.y_tilde);
            if (ctx.json()) {
              Json doc = document(ctx);
              doc["fit"] = to_json(fit);
              return render(doc);
            }
            Csv csv(ctx.meta);
            csv.header(kFitColumns);
            csv.row(fit_row(fit));
            return csv.str();
          }};
}

// ----------------------------------------------------------------- fit-mcem

Command fit_mcem_command(CLI::App& root) {
  struct Opts {
    DataOptions data;
    McemOptions mcem;
  };
  auto o = std::make_shared<Opts>();
  auto* app = root.add_subcommand(
      "fit-mcem", "Maximum likelihood through the privacy mechanism by Monte Carlo EM");
  add_data(app, o->data);
  add_mcem(app, o->mcem);
  return {app, [o](const Context& ctx) {
            const auto data = load_release(o->data, ctx);
            const auto config = mcem_config(o->mcem, o->data.model);
            const auto res = run_mcem(data, config, Stream(ctx.seed()));
            if (ctx.json()) {
              Json doc = document(ctx);
              doc["fit"] = to_json(res.fit);
              doc["converged"] = res.converged;
              doc["k_samples"] = res.k_samples;
              doc["fisher"] = to_json(res.fisher);
              doc["score"] = {{"mean", {res.score.mean(0), res.score.mean(1)}},
                              {"standard_error",
                               {res.score.standard_error(0), res.score.standard_error(1)}}};
              if (res.ellipse) {
                doc["ellipse"] = to_json(*res.ellipse);
              } else {
                doc["ellipse"] = nullptr;
                doc["ellipse_error"] = res.ellipse_error.value_or("");
              }
              Json trace = Json::array();
              for (const auto& t : res.trace) {
                trace.push_back({{"iter", t.iter},
                                 {"beta0", t.beta0},
                                 {"beta1", t.beta1},
                                 {"ess", t.ess},
                                 {"max_log_weight", t.max_log_weight},
                                 {"k_samples", t.k_samples}});
              }
              doc["trace"] = std::move(trace);
              return render(doc);
            }
            Csv csv(ctx.meta);
            csv.header({"iter", "beta0", "beta1", "ess", "max_log_weight", "k_samples"});
            for (const auto& t : res.trace) {
              csv.row({count(t.iter), number(t.beta0), number(t.beta1), number(t.ess),
                       number(t.max_log_weight), count(t.k_samples)});
            }
            const auto& f = res.fit;
            csv.comment("fit beta0=" + number(f.beta0) + " beta1=" + number(f.beta1) +
                        " residual_variance=" + number(f.residual_variance) +
                        " converged=" + (res.converged ? "true" : "false") +
                        " k_samples=" + count(res.k_samples));
            csv.comment("score mean=" + number(res.score.mean(0)) + ";" +
                        number(res.score.mean(1)) + " se=" +
                        number(res.score.standard_error(0)) + ";" +
                        number(res.score.standard_error(1)));
            if (res.ellipse) {
              const auto& e = *res.ellipse;
              csv.comment("ellipse center=" + number(e.center(0)) + ";" +
                          number(e.center(1)) + " shape=" + number(e.shape(0, 0)) + ";" +
                          number(e.shape(0, 1)) + ";" + number(e.shape(1, 1)) +
                          " level=" + number(e.level));
            } else {
              csv.comment("ellipse error=" + res.ellipse_error.value_or(""));
            }
            return csv.str();
          }};
}

// ------------------------------------------------------------ abc-posterior

Command abc_command(CLI::App& root) {
  struct Opts {
    DataOptions data;
    std::size_t draws = 1000;
    std::string prior = "box";
    std::vector<double> prior_beta0{-20, 20};
    std::vector<double> prior_beta1{-10, 10};
    std::size_t max_proposals = 0;
    std::size_t batch = 1 << 15;
    bool toy = false;
  };
  auto o = std::make_shared<Opts>();
  auto* app = root.add_subcommand(
      "abc-posterior", "Exact posterior draws by rejection through the mechanism");
  add_data(app, o->data);
  app->add_option("--draws", o->draws, "Accepted draws to collect");
  app->add_option("--prior", o->prior, "Prior family on (beta0, beta1)")
      ->check(CLI::IsMember({"box", "normal"}));
  app->add_option("--prior-beta0", o->prior_beta0,
                  "Box bounds, or mean and sd, for beta0")
      ->expected(2)
      ->delimiter(',');
  app->add_option("--prior-beta1", o->prior_beta1,
                  "Box bounds, or mean and sd, for beta1")
      ->expected(2)
      ->delimiter(',');
  app->add_option("--max-proposals", o->max_proposals, "Proposal cap, 0 for none");
  app->add_option("--batch", o->batch, "Proposals per parallel batch");
  app->add_flag("--toy", o->toy,
                "Run on a random discrete toy and compare with the exact posterior");
  return {app, [o](const Context& ctx) {
            const Stream root_rng(ctx.seed());
            AbcOptions options;
            options.batch = o->batch;
            options.max_proposals = o->max_proposals;
            if (o->toy) {
              Stream toy_rng = root_rng.child("toy");
              const DiscreteToy toy = random_toy(toy_rng);
              Stream pick_rng = root_rng.child("truth");
              double u = pick_rng.uniform();
              std::size_t truth = 0;
              while (truth + 1 < toy.prior.size() && u > toy.prior[truth]) {
                u -= toy.prior[truth];
                ++truth;
              }
              Stream data_rng = root_rng.child("confidential");
              const auto s = toy.sample_confidential(toy.beta_grid[truth], data_rng);
              Stream release_rng = root_rng.child("release");
              const auto s_tilde = toy.privatize(s, release_rng);
              const auto grid = grid_posterior_oracle(toy, s_tilde);
              const auto mixture = mixture_posterior_oracle(toy, s_tilde);
              const auto abc =
                  abc_toy_posterior(toy, s_tilde, o->draws, root_rng.child("abc"), options);
              const auto hist = abc.histogram();
              const double tv = total_variation(hist, grid);
              if (ctx.json()) {
                Json doc = document(ctx);
                Json rows = Json::array();
                for (std::size_t g = 0; g < toy.beta_grid.size(); ++g) {
                  rows.push_back({{"beta0", toy.beta_grid[g](0)},
                                  {"beta1", toy.beta_grid[g](1)},
                                  {"prior", toy.prior[g]},
                                  {"grid", grid[g]},
                                  {"mixture", mixture.posterior[g]},
                                  {"abc", hist[g]}});
                }
                doc["posterior"] = std::move(rows);
                doc["true_index"] = truth;
                doc["proposals"] = abc.proposals;
                doc["total_variation"] = tv;
                return render(doc);
              }
              Csv csv(ctx.meta);
              csv.header({"beta0", "beta1", "prior", "grid", "mixture", "abc"});
              for (std::size_t g = 0; g < toy.beta_grid.size(); ++g) {
                csv.row({number(toy.beta_grid[g](0)), number(toy.beta_grid[g](1)),
                         number(toy.prior[g]), number(grid[g]),
                         number(mixture.posterior[g]), number(hist[g])});
              }
              csv.comment("true_index=" + count(truth) + " proposals=" +
                          count(abc.proposals) + " total_variation=" + number(tv));
              return csv.str();
            }
            const auto data = load_release(o->data, ctx);
            const auto& p0 = o->prior_beta0;
            const auto& p1 = o->prior_beta1;
            const PriorSpec prior = o->prior == "box"
                                        ? PriorSpec::box(p0[0], p0[1], p1[0], p1[1])
                                        : PriorSpec::normal(p0[0], p0[1], p1[0], p1[1]);
            const AbcModel model{o->data.model.sigma, o->data.model.lambda};
            const auto res = abc_exact_posterior(data, prior, model, o->draws,
                                                 root_rng.child("abc"), options);
            if (ctx.json()) {
              Json doc = document(ctx);
              Json draws = Json::array();
              for (const auto& d : res.draws) draws.push_back({d(0), d(1)});
              doc["draws"] = std::move(draws);
              doc["proposals"] = res.proposals;
              doc["acceptance_rate"] = res.acceptance_rate;
              return render(doc);
            }
            Csv csv(ctx.meta);
            csv.header({"draw", "beta0", "beta1"});
            for (std::size_t i = 0; i < res.draws.size(); ++i) {
              csv.row({count(i), number(res.draws[i](0)), number(res.draws[i](1))});
            }
            csv.comment("proposals=" + count(res.proposals) +
                        " acceptance_rate=" + number(res.acceptance_rate));
            return csv.str();
          }};
}

// --------------------------------------------------------------- clt-limits

Command clt_command(CLI::App& root) {
  struct Opts {
    DesignOptions design;
    std::size_t replicates = 0;
  };
  auto o = std::make_shared<Opts>();
  o->design.sigma_u = {0, 0.5, 1, 1.5, 2};
  o->design.sigma_v = {0, 0.5, 1, 1.5, 2};
  auto* app = root.add_subcommand(
      "clt-limits", "Large-sample distribution limits of the naive slope");
  add_design(app, o->design);
  app->add_option("--beta0", o->design.beta0, "True intercept, used by --replicates");
  app->add_option("--replicates", o->replicates,
                  "Monte Carlo replicates per cell, 0 for the limits only");
  return {app, [o](const Context& ctx) {
            const auto& d = o->design;
            const auto x = make_design(d);
            const auto m = sample_moments(x);
            std::optional<Stream> rng;
            if (o->replicates > 0) rng = Stream(ctx.seed()).child("clt-limits");
            Json rows = Json::array();
            Csv csv(ctx.meta);
            std::vector<std::string> head{"sigma_u", "sigma_v", "gamma", "sigma_tilde",
                                          "center", "lower", "upper"};
            if (rng) head.insert(head.end(), {"mc_mean", "mc_lower", "mc_upper"});
            csv.header(head);
            std::uint64_t cell = 0;
            for (double su : d.sigma_u) {
              for (double sv : d.sigma_v) {
                const auto s = clt_summary(m, d.beta1, d.sigma * d.sigma, su * su,
                                           sv * sv, d.alpha);
                const auto lim =
                    distribution_limits(s.gamma, d.beta1, s.sigma_tilde, x.size(), d.alpha);
                std::vector<std::string> row{number(su),      number(sv),
                                             number(s.gamma), number(s.sigma_tilde),
                                             number(s.center), number(lim.lower),
                                             number(lim.upper)};
                Json jrow{{"sigma_u", su},          {"sigma_v", sv},
                          {"gamma", s.gamma},       {"sigma_tilde", s.sigma_tilde},
                          {"center", s.center},     {"lower", lim.lower},
                          {"upper", lim.upper}};
                if (rng) {
                  const FixedDesignNoise noise{d.beta0, d.beta1, d.sigma, su, sv};
                  auto slopes = simulate_fixed_design_slopes(x, noise, o->replicates,
                                                             rng->child(cell));
                  std::erase_if(slopes, [](double b) { return std::isnan(b); });
                  require(!slopes.empty(), "clt-limits: every replicate was degenerate");
                  std::sort(slopes.begin(), slopes.end());
                  double sum = 0;
                  for (double b : slopes) sum += b;
                  const double mc_mean = sum / static_cast<double>(slopes.size());
                  const double lo = quantile_sorted(slopes, d.alpha / 2);
                  const double hi = quantile_sorted(slopes, 1 - d.alpha / 2);
                  row.insert(row.end(), {number(mc_mean), number(lo), number(hi)});
                  jrow["mc_mean"] = mc_mean;
                  jrow["mc_lower"] = lo;
                  jrow["mc_upper"] = hi;
                }
                csv.row(row);
                rows.push_back(std::move(jrow));
                ++cell;
              }
            }
            if (ctx.json()) {
              Json doc = document(ctx);
              doc["design"] = {{"n", m.n}, {"mean", m.mean_x}, {"v", m.v}, {"k", m.k}};
              doc["limits"] = std::move(rows);
              return render(doc);
            }
            csv.comment("design n=" + count(m.n) + " v=" + number(m.v) + " k=" + number(m.k));
            return csv.str();
          }};
}

// ------------------------------------------------------------ coverage-grid

Command coverage_command(CLI::App& root) {
  struct Opts {
    DesignOptions design;
    std::string convention = "both";
  };
  auto o = std::make_shared<Opts>();
  auto* app = root.add_subcommand(
      "coverage-grid", "Limiting coverage of the naive interval over a noise grid");
  add_design(app, o->design);
  app->add_option("--convention", o->convention,
                  "Standard error the interval uses: privacy-aware, classical or both")
      ->check(CLI::IsMember({"privacy-aware", "classical", "both"}));
  return {app, [o](const Context& ctx) {
            const auto& d = o->design;
            const auto x = make_design(d);
            std::vector<CoverageConvention::Kind> kinds;
            if (o->convention != "classical") {
              kinds.push_back(CoverageConvention::Kind::privacy_aware_se);
            }
            if (o->convention != "privacy-aware") {
              kinds.push_back(CoverageConvention::Kind::classical_se);
            }
            Csv csv(ctx.meta);
            csv.header({"sigma_u", "sigma_v", "convention", "coverage"});
            Json rows = Json::array();
            for (const auto kind : kinds) {
              const auto cells = coverage_grid(x, d.beta1, d.sigma * d.sigma, d.sigma_u,
                                               d.sigma_v, d.alpha, kind);
              for (const auto& c : cells) {
                const std::string name(convention_name(c.convention));
                csv.row({number(c.sigma_u), number(c.sigma_v), name, number(c.coverage)});
                rows.push_back({{"sigma_u", c.sigma_u},
                                {"sigma_v", c.sigma_v},
                                {"convention", name},
                                {"coverage", c.coverage}});
              }
            }
            if (ctx.json()) {
              Json doc = document(ctx);
              doc["coverage"] = std::move(rows);
              return render(doc);
            }
            return csv.str();
          }};
}

// ------------------------------------------------------------ ellipse-study

struct EllipseRow {
  std::size_t replicate = 0;
  std::string method;
  std::optional<Ellipse> ellipse;
  bool covers = false;
  bool converged = true;
  std::string status = "ok";
};

Command ellipse_command(CLI::App& root) {
  struct Opts {
    DataOptions data;
    McemOptions mcem;
    std::size_t replicates = 100;
  };
  auto o = std::make_shared<Opts>();
  auto* app = root.add_subcommand(
      "ellipse-study",
      "Coverage of naive and MCEM confidence ellipses over simulated releases");
  add_model(app, o->data.model);
  add_budgets(app, o->data);
  app->add_option("--n", o->data.n, "Records per replicate");
  app->add_option("--replicates", o->replicates, "Simulated releases");
  add_mcem(app, o->mcem);
  return {app, [o](const Context& ctx) {
            const Stream root_rng(ctx.seed());
            const auto config = mcem_config(o->mcem, o->data.model);
            const Eigen::Vector2d truth(o->data.model.beta0, o->data.model.beta1);
            std::vector<EllipseRow> rows;
            std::size_t naive_hits = 0, mcem_hits = 0, mcem_failed = 0, unconverged = 0;
            for (std::size_t r = 0; r < o->replicates; ++r) {
              const Stream rep = root_rng.child("replicate").child(r);
              const auto sim = simulate_data(o->data, rep);

              EllipseRow naive;
              naive.replicate = r;
              naive.method = "naive";
              const auto fit = ols(sim.release.x_tilde, sim.release.y_tilde);
              try {
                naive.ellipse = confidence_ellipse(fit.theta(), fit.covariance.inverse(),
                                                   config.alpha);
                naive.covers = naive.ellipse->contains(truth);
              } catch (const Error& e) {
                naive.status = std::string(error_name(e.code()));
              }
              naive_hits += naive.covers;
              rows.push_back(std::move(naive));

              EllipseRow em;
              em.replicate = r;
              em.method = "mcem";
              const auto res = run_mcem(sim.release, config, rep.child("fit"));
              em.converged = res.converged;
              unconverged += !res.converged;
              if (res.ellipse) {
                em.ellipse = res.ellipse;
                em.covers = res.ellipse->contains(truth);
              } else {
                em.status = res.ellipse_error.value_or("error");
                ++mcem_failed;
              }
              mcem_hits += em.covers;
              rows.push_back(std::move(em));
            }
            const double reps = static_cast<double>(o->replicates);
            const double naive_rate = o->replicates ? naive_hits / reps : 0.0;
            const double mcem_rate = o->replicates ? mcem_hits / reps : 0.0;
            if (ctx.json()) {
              Json doc = document(ctx);
              Json list = Json::array();
              for (const auto& row : rows) {
                Json j{{"replicate", row.replicate}, {"method", row.method}};
                j["ellipse"] = row.ellipse ? to_json(*row.ellipse) : Json(nullptr);
                j["covers"] = row.covers;
                j["converged"] = row.converged;
                j["status"] = row.status;
                list.push_back(std::move(j));
              }
              doc["replicates"] = std::move(list);
              doc["summary"] = {{"replicates", o->replicates},
                                {"naive_covered", naive_hits},
                                {"mcem_covered", mcem_hits},
                                {"naive_coverage", naive_rate},
                                {"mcem_coverage", mcem_rate},
                                {"mcem_ellipse_failures", mcem_failed},
                                {"mcem_not_converged", unconverged}};
              return render(doc);
            }
            Csv csv(ctx.meta);
            csv.header({"replicate", "method", "center_beta0", "center_beta1", "shape00",
                        "shape01", "shape11", "level", "covers", "converged", "status"});
            const std::string nan = number(std::nan(""));
            for (const auto& row : rows) {
              std::vector<std::string> cells{count(row.replicate), row.method};
              if (row.ellipse) {
                const auto& e = *row.ellipse;
                cells.insert(cells.end(),
                             {number(e.center(0)), number(e.center(1)),
                              number(e.shape(0, 0)), number(e.shape(0, 1)),
                              number(e.shape(1, 1)), number(e.level)});
              } else {
                cells.insert(cells.end(), 6, nan);
              }
              cells.insert(cells.end(), {row.covers ? "1" : "0", row.converged ? "1" : "0",
                                         row.status});
              csv.row(cells);
            }
            csv.comment("coverage naive=" + number(naive_rate) + " mcem=" +
                        number(mcem_rate) + " replicates=" + count(o->replicates) +
                        " naive_covered=" + count(naive_hits) + " mcem_covered=" +
                        count(mcem_hits) + " mcem_ellipse_failures=" +
                        count(mcem_failed) + " mcem_not_converged=" + count(unconverged));
            return csv.str();
          }};
}

// ------------------------------------------------------------- dissimilarity

Command dissimilarity_command(CLI::App& root) {
  struct Opts {
    std::string input;
    double epsilon = 1;
    std::size_t replicates = 1000;
  };
  auto o = std::make_shared<Opts>();
  auto* app = root.add_subcommand(
      "dissimilarity", "Dissimilarity index under double-geometric noise on the counts");
  app->add_option("--input", o->input, "CSV with columns tract,w,b")->required();
  app->add_option("--epsilon", o->epsilon, "Privacy loss budget per count");
  app->add_option("--replicates", o->replicates, "Privatized replicates");
  return {app, [o](const Context& ctx) {
            const auto table = read_county(o->input);
            const auto study = privatized_dissimilarity_study(
                table, PrivacyBudget(o->epsilon), o->replicates,
                Stream(ctx.seed()).child("dissimilarity"));
            std::vector<std::pair<std::string, double>> items{
                {"confidential", study.confidential},
                {"replicates", static_cast<double>(study.replicates)},
                {"defined", static_cast<double>(study.defined)},
                {"mean", study.mean},
                {"sd", study.sd}};
            for (const auto& [p, v] : study.quantiles) items.emplace_back("q" + number(p), v);
            items.emplace_back("undefined_fraction", study.undefined_fraction);
            items.emplace_back("out_of_range_fraction", study.out_of_range_fraction);
            if (ctx.json()) {
              Json doc = document(ctx);
              Json summary;
              for (const auto& [k, v] : items) summary[k] = number_json(v);
              doc["summary"] = std::move(summary);
              return render(doc);
            }
            Csv csv(ctx.meta);
            csv.header({"quantity", "value"});
            for (const auto& [k, v] : items) csv.row({k, number(v)});
            return csv.str();
          }};
}

// ---------------------------------------------------------------- verify-dp

Command verify_command(CLI::App& root) {
  struct Opts {
    std::string family;
    double epsilon = 1;
    std::int64_t support_bound = 100;
    double claimed = 0;
    CLI::Option* claimed_opt = nullptr;
  };
  auto o = std::make_shared<Opts>();
  auto* app = root.add_subcommand(
      "verify-dp", "Enumerate the privacy loss of a discrete mechanism");
  app->add_option("--family", o->family, "double-geometric or randomized-response")
      ->required();
  app->add_option("--epsilon", o->epsilon, "Budget the mechanism is run at")->required();
  app->add_option("--support-bound", o->support_bound,
                  "Outputs enumerated over [-bound, bound]");
  o->claimed_opt = app->add_option("--claimed-epsilon", o->claimed,
                                   "Bound to check against, default --epsilon")
                       ->default_str("");
  return {app, [o](const Context& ctx) {
            const Family family = parse_family(o->family);
            std::optional<PrivacyBudget> claimed;
            if (o->claimed_opt->count() > 0) claimed = PrivacyBudget(o->claimed);
            const auto report = verify_dp_discrete(family, PrivacyBudget(o->epsilon),
                                                   o->support_bound, claimed);
            const double bound = claimed.value_or(PrivacyBudget(o->epsilon)).epsilon();
            if (ctx.json()) {
              Json doc = document(ctx);
              doc["family"] = family_name(family);
              doc["epsilon"] = o->epsilon;
              doc["claimed_epsilon"] = bound;
              doc["max_log_ratio"] = report.max_log_ratio;
              doc["satisfied"] = report.satisfied;
              return render(doc);
            }
            Csv csv(ctx.meta);
            csv.header({"family", "epsilon", "claimed_epsilon", "max_log_ratio", "satisfied"});
            csv.row({std::string(family_name(family)), number(o->epsilon), number(bound),
                     number(report.max_log_ratio), report.satisfied ? "true" : "false"});
            return csv.str();
          }};
}

}  // namespace

std::vector<Command> add_commands(CLI::App& root) {
  return {privatize_command(root), simulate_command(root),   fit_naive_command(root),
          fit_mcem_command(root),  abc_command(root),        clt_command(root),
          coverage_command(root),  ellipse_command(root),    dissimilarity_command(root),
          verify_command(root)};
}

}  // namespace tprivacy::cli
