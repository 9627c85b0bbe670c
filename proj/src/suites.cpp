#include "fmdp/suites.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <sstream>
#include <thread>

#include "fmdp/bonuses.hpp"
#include "fmdp/environments.hpp"
#include "fmdp/errors.hpp"
#include "fmdp/harness.hpp"
#include "fmdp/learner.hpp"
#include "fmdp/model_io.hpp"
#include "fmdp/planner.hpp"
#include "fmdp/random.hpp"
#include "fmdp/structured_text.hpp"

namespace fmdp {

namespace {

using Clock = std::chrono::steady_clock;

template <typename Body>
CheckResult timed(std::string name, Body body) {
  const auto start = Clock::now();
  CheckResult result;
  try {
    result = body();
  } catch (const std::exception& e) {
    result.passed = false;
    result.detail = std::string("exception: ") + e.what();
  }
  result.name = std::move(name);
  result.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return result;
}

std::string fmt(double value, int precision = 4) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out.precision(precision);
  out << value;
  return out.str();
}

void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& body) {
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> failures(n);
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const auto count = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(n, 1));
  for (std::size_t j = 1; j < count; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
}

std::vector<double> dirichlet_row(std::size_t size, Rng& rng) {
  std::vector<double> row(size);
  double sum = 0.0;
  for (auto& v : row) {
    v = -std::log(1.0 - rng.uniform());
    sum += v;
  }
  for (auto& v : row) v /= sum;
  return row;
}

struct ProductInstance {
  FactoredSpace space;
  std::vector<std::vector<double>> p_hat;
  std::vector<std::vector<double>> p;
  std::vector<double> values;
};

ProductInstance random_product_instance(Rng& rng, std::size_t max_m, std::size_t max_size) {
  const auto m = 1 + rng.below(max_m);
  std::vector<std::size_t> sizes(m);
  for (auto& s : sizes) s = 2 + rng.below(max_size - 1);
  ProductInstance inst{FactoredSpace(sizes), {}, {}, {}};
  for (std::size_t i = 0; i < m; ++i) {
    inst.p_hat.push_back(dirichlet_row(sizes[i], rng));
    inst.p.push_back(dirichlet_row(sizes[i], rng));
  }
  const double scale = 1.0 + 9.0 * rng.uniform();
  inst.values.resize(inst.space.total());
  for (auto& v : inst.values) v = scale * rng.uniform();
  return inst;
}

/// prod_i rows[i][s[i]] for every flat s.
double product_weight(const std::vector<const std::vector<double>*>& rows, const Tuple& s) {
  double w = 1.0;
  for (std::size_t i = 0; i < rows.size(); ++i) w *= (*rows[i])[s[i]];
  return w;
}

double initial_max_regret(const Environment& env) {
  const auto best = exact_value_iteration(*env.model);
  const auto worst = exact_value_iteration(*env.model, Objective::minimize);
  double gap = 0.0;
  for (auto s : env.initial.states()) gap = std::max(gap, best.values[0][s] - worst.values[0][s]);
  return gap;
}

std::filesystem::path scratch_directory(const std::string& tag) {
  static std::atomic<unsigned> counter{0};
  const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
  return std::filesystem::temp_directory_path() /
         ("fmdp_" + tag + "_" + std::to_string(stamp) + "_" + std::to_string(counter++));
}

}  // namespace

bool SuiteReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::size_t episodes_to_threshold(const RegretCurve& curve, double threshold, std::size_t window) {
  const auto& r = curve.records;
  if (window == 0) throw ParameterError("episodes_to_threshold: window must be positive");
  double sum = 0.0;
  for (std::size_t k = 0; k < r.size(); ++k) {
    sum += r[k].regret;
    if (k >= window) sum -= r[k - window].regret;
    if (k + 1 >= window && sum / static_cast<double>(window) <= threshold) return k + 1;
  }
  return r.size() + 1;
}

CheckResult check_inverse_telescoping(std::size_t instances, std::uint64_t seed, double tolerance) {
  return timed("inverse_telescoping", [&] {
    Rng rng(derive_seed(seed, 0x7e1e));
    double worst = 0.0;
    for (std::size_t n = 0; n < instances; ++n) {
      const auto inst = random_product_instance(rng, 4, 5);
      const auto m = inst.p.size();
      std::vector<const std::vector<double>*> hat_rows, true_rows;
      for (std::size_t i = 0; i < m; ++i) {
        hat_rows.push_back(&inst.p_hat[i]);
        true_rows.push_back(&inst.p[i]);
      }
      double lhs = 0.0;
      double rhs = 0.0;
      for (std::size_t flat = 0; flat < inst.space.total(); ++flat) {
        const auto s = inst.space.tuple_of(flat);
        const double v = inst.values[flat];
        lhs += (product_weight(hat_rows, s) - product_weight(true_rows, s)) * v;
        for (std::size_t i = 0; i < m; ++i) {
          // Components before i under P, after i under P-hat.
          double w = inst.p_hat[i][s[i]] - inst.p[i][s[i]];
          for (std::size_t j = 0; j < m; ++j) {
            if (j < i) w *= inst.p[j][s[j]];
            if (j > i) w *= inst.p_hat[j][s[j]];
          }
          rhs += w * v;
        }
      }
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    return CheckResult{"", worst <= tolerance,
                       std::to_string(instances) + " instances, max |lhs-rhs| = " + fmt(worst, 3),
                       0.0};
  });
}

CheckResult check_component_variance_bound(std::size_t instances, std::uint64_t seed,
                                           double tolerance) {
  return timed("component_variance_bound", [&] {
    Rng rng(derive_seed(seed, 0x7a2b));
    double worst = -1e300;
    std::size_t violations = 0;
    for (std::size_t n = 0; n < instances; ++n) {
      const auto inst = random_product_instance(rng, 4, 5);
      const auto m = inst.p.size();
      std::vector<const std::vector<double>*> rows;
      for (const auto& r : inst.p) rows.push_back(&r);
      // Var_P(V) by enumeration.
      double mean = 0.0;
      for (std::size_t flat = 0; flat < inst.space.total(); ++flat) {
        mean += product_weight(rows, inst.space.tuple_of(flat)) * inst.values[flat];
      }
      double total_var = 0.0;
      for (std::size_t flat = 0; flat < inst.space.total(); ++flat) {
        const double d = inst.values[flat] - mean;
        total_var += product_weight(rows, inst.space.tuple_of(flat)) * d * d;
      }
      for (std::size_t i = 0; i < m; ++i) {
        // f(v) = E[V | s[i] = v] under the other components.
        std::vector<double> f(inst.p[i].size(), 0.0);
        for (std::size_t flat = 0; flat < inst.space.total(); ++flat) {
          const auto s = inst.space.tuple_of(flat);
          double w = 1.0;
          for (std::size_t j = 0; j < m; ++j) {
            if (j != i) w *= inst.p[j][s[j]];
          }
          f[s[i]] += w * inst.values[flat];
        }
        double f_mean = 0.0;
        for (std::size_t v = 0; v < f.size(); ++v) f_mean += inst.p[i][v] * f[v];
        double component_var = 0.0;
        for (std::size_t v = 0; v < f.size(); ++v) {
          component_var += inst.p[i][v] * (f[v] - f_mean) * (f[v] - f_mean);
        }
        // The library's contraction must agree with the enumeration.
        std::vector<std::span<const double>> spans(inst.p.begin(), inst.p.end());
        const double lib_var = weighted_variance(inst.p[i], expect_over_complement(spans, inst.values, i));
        if (std::abs(lib_var - component_var) > 1e-10) ++violations;
        worst = std::max(worst, component_var - total_var);
        if (component_var > total_var + tolerance) ++violations;
      }
    }
    return CheckResult{"", violations == 0,
                       std::to_string(instances) + " instances, max(component - total) = " +
                           fmt(worst, 3) + ", violations " + std::to_string(violations),
                       0.0};
  });
}

CheckResult check_jao_optimal_value(double tolerance) {
  return timed("jao_optimal_value", [&] {
    double worst = 0.0;
    std::size_t cases = 0;
    for (double delta : {0.1, 0.25, 0.4}) {
      for (double eps : {0.0, 0.05, 0.1}) {
        for (std::size_t H : {2, 4, 8}) {
          JaoParams p;
          p.delta = delta;
          p.epsilon = eps;
          p.horizon = H;
          const auto env = make_jao_episodic(p);
          const auto opt = exact_value_iteration(*env.model);
          worst = std::max(worst, std::abs(opt.values[0][0] - jao_optimal_value(delta, eps, H)));
          ++cases;
        }
      }
    }
    return CheckResult{"", worst <= tolerance,
                       std::to_string(cases) + " grid points, max error " + fmt(worst, 3), 0.0};
  });
}

CheckResult check_jao_occupancy(std::size_t episodes, std::uint64_t seed, double sigmas) {
  return timed("jao_occupancy", [&] {
    std::string detail;
    bool ok = true;
    for (auto [delta, H] : {std::pair{0.25, std::size_t{3}}, std::pair{0.1, std::size_t{6}},
                            std::pair{0.4, std::size_t{4}}}) {
      JaoParams p;
      p.delta = delta;
      p.epsilon = 0.0;
      p.horizon = H;
      const auto env = make_jao_episodic(p);
      EpisodicEnv sim(env, derive_seed(seed, static_cast<std::uint64_t>(delta * 1000) + H));
      Rng policy_rng(derive_seed(seed, 0x9011 + H));
      const auto A = env.model->num_actions();
      std::size_t hits = 0;
      for (std::size_t k = 0; k < episodes; ++k) {
        auto s = sim.reset();
        for (std::size_t t = 1; t < H; ++t) s = sim.step(policy_rng.below(A)).next_state;
        hits += s % 2 == 1 ? 1 : 0;
      }
      const double expected = jao_uniform_last_state_probability(delta, H);
      const double observed = static_cast<double>(hits) / static_cast<double>(episodes);
      const double sigma = std::sqrt(expected * (1.0 - expected) / static_cast<double>(episodes));
      const double z = std::abs(observed - expected) / sigma;
      ok = ok && z <= sigmas;
      detail += "delta=" + fmt(delta) + ",H=" + std::to_string(H) + ": " + fmt(observed, 5) +
                " vs " + fmt(expected, 5) + " (" + fmt(z, 3) + " sigma); ";
    }
    detail.resize(detail.size() - 2);
    return CheckResult{"", ok, detail, 0.0};
  });
}

CheckResult check_single_component_reduction() {
  return timed("single_component_reduction", [&] {
    std::size_t mismatches = 0;
    std::size_t cases = 0;
    for (double H : {1.0, 2.0, 5.0, 10.0, 37.0, 100.0}) {
      for (double L : {0.5, 1.0, 2.302585092994046, 13.7, 27.631021115928547, 100.0}) {
        for (std::uint64_t N : {1ULL, 2ULL, 3ULL, 7ULL, 100ULL, 12345ULL, 1000000007ULL}) {
          const std::uint64_t counts[] = {N};
          const std::size_t sizes[] = {9};
          const double bonus = hoeffding_transition_bonus(counts, sizes, H, L);
          const double reference = H * std::sqrt(L / (2.0 * static_cast<double>(N)));
          if (bonus != reference) ++mismatches;
          ++cases;
        }
      }
    }
    return CheckResult{"", mismatches == 0,
                       std::to_string(cases) + " grid points, " + std::to_string(mismatches) +
                           " not bit-identical",
                       0.0};
  });
}

CheckResult check_empirical_optimism(std::size_t runs, std::size_t episodes, std::size_t required,
                                     std::size_t jobs) {
  return timed("empirical_optimism", [&] {
    const auto env = make_benchmark_fmdp();
    const auto optimal = exact_value_iteration(*env.model);
    std::string detail;
    bool ok = true;
    for (auto kind : {AgentKind::f_ucbvi, AgentKind::f_euler}) {
      std::vector<char> good(runs, 0);
      parallel_for(runs, jobs, [&](std::size_t r) {
        auto config = make_agent(kind, true);
        config.delta = 0.1;
        config.episodes = episodes;
        config.seed = r;
        bool holds = true;
        run_episodes(env, config, [&](std::size_t, const ValueBounds& b) {
          for (std::size_t t = 0; t < b.ucb.size() && holds; ++t) {
            for (std::size_t s = 0; s < b.ucb[t].size(); ++s) {
              if (b.ucb[t][s] < optimal.values[t][s]) holds = false;
              if (config.track_lcb && b.lcb[t][s] > optimal.values[t][s]) holds = false;
            }
          }
        });
        good[r] = holds ? 1 : 0;
      });
      const auto count = static_cast<std::size_t>(std::count(good.begin(), good.end(), 1));
      ok = ok && count >= required;
      detail += to_string(kind) + " " + std::to_string(count) + "/" + std::to_string(runs) + "; ";
    }
    return CheckResult{"", ok, detail + "need " + std::to_string(required), 0.0};
  });
}

CheckResult check_sublinear_regret(std::size_t seeds, std::size_t episodes, std::size_t required,
                                   double ratio, std::size_t jobs) {
  return timed("sublinear_regret", [&] {
    const auto env = make_benchmark_fmdp();
    const auto decile = std::max<std::size_t>(episodes / 10, 1);
    std::string detail;
    bool ok = true;
    for (auto kind : {AgentKind::f_ucbvi, AgentKind::f_euler, AgentKind::l1_baseline}) {
      std::vector<double> ratios(seeds);
      parallel_for(seeds, jobs, [&](std::size_t s) {
        auto config = make_agent(kind, true);
        config.episodes = episodes;
        config.seed = s;
        const auto result = run_episodes(env, config);
        const double first = result.curve.mean_regret(0, decile);
        const double last = result.curve.mean_regret(episodes - decile, episodes);
        ratios[s] = first > 0.0 ? last / first : (last > 0.0 ? INFINITY : 0.0);
      });
      const auto count = static_cast<std::size_t>(
          std::count_if(ratios.begin(), ratios.end(), [&](double r) { return r <= ratio; }));
      ok = ok && count >= required;
      detail += to_string(kind) + " " + std::to_string(count) + "/" + std::to_string(seeds) +
                " (median ratio " + fmt(quantile(ratios, 0.5), 3) + "); ";
    }
    return CheckResult{"", ok, detail + "need " + std::to_string(required), 0.0};
  });
}

CheckResult check_factorization_advantage(std::size_t seeds, std::size_t episodes,
                                          std::size_t required, std::size_t jobs) {
  return timed("factorization_advantage", [&] {
    const auto env = make_benchmark_fmdp();
    const auto flat = flatten(env);
    const double threshold = 0.05 * initial_max_regret(env);
    const std::size_t window = std::max<std::size_t>(episodes / 40, 1);
    std::vector<std::size_t> factored_ett(seeds), flat_ett(seeds);
    parallel_for(2 * seeds, jobs, [&](std::size_t job) {
      const auto s = job / 2;
      auto config = make_agent(AgentKind::f_ucbvi, true);
      config.episodes = episodes;
      config.seed = s;
      if (job % 2 == 0) {
        factored_ett[s] = episodes_to_threshold(run_episodes(env, config).curve, threshold, window);
      } else {
        flat_ett[s] = episodes_to_threshold(run_episodes(flat, config).curve, threshold, window);
      }
    });
    std::size_t wins = 0;
    std::string runs;
    for (std::size_t s = 0; s < seeds; ++s) {
      if (factored_ett[s] < flat_ett[s]) ++wins;
      runs += " " + std::to_string(factored_ett[s]) + "/" + std::to_string(flat_ett[s]);
    }
    return CheckResult{"", wins >= required,
                       "factored wins " + std::to_string(wins) + "/" + std::to_string(seeds) +
                           ", need " + std::to_string(required) +
                           "; episodes to threshold (factored/flat):" + runs,
                       0.0};
  });
}

CheckResult check_euler_not_worse(std::size_t seeds, std::size_t episodes, double slack,
                                  std::size_t jobs) {
  return timed("euler_not_worse", [&] {
    const auto env = make_benchmark_fmdp();
    std::vector<double> euler(seeds), ucbvi(seeds);
    parallel_for(2 * seeds, jobs, [&](std::size_t job) {
      const auto s = job / 2;
      auto config = make_agent(job % 2 == 0 ? AgentKind::f_euler : AgentKind::f_ucbvi, true);
      config.episodes = episodes;
      config.seed = s;
      (job % 2 == 0 ? euler : ucbvi)[s] = run_episodes(env, config).curve.total();
    });
    const double e = quantile(euler, 0.5);
    const double u = quantile(ucbvi, 0.5);
    return CheckResult{"", e <= slack * u,
                       "median cumulative regret f_euler " + fmt(e, 6) + ", f_ucbvi " + fmt(u, 6) +
                           ", ratio " + fmt(e / u, 3) + ", allowed " + fmt(slack),
                       0.0};
  });
}

CheckResult check_mab_like_gaps(double tolerance) {
  return timed("mab_like_gaps", [&] {
    double worst_gap = 0.0;
    double worst_uniform = 0.0;
    std::size_t cases = 0;
    for (const auto& actions : {std::vector<std::size_t>{2}, std::vector<std::size_t>{3},
                                std::vector<std::size_t>{2, 2}}) {
      for (std::size_t copies : {1, 3}) {
        for (double eps : {0.05, 0.1, 0.3}) {
          for (std::size_t H : {2, 5, 9}) {
            MabLikeParams p;
            p.action_sizes = actions;
            p.copies = copies;
            p.epsilon = eps;
            p.base = 0.5;
            p.horizon = H;
            const auto env = make_mab_like_fmdp(p);
            const auto& model = *env.model;
            const auto A = model.num_actions();
            const auto opt = exact_value_iteration(model);
            const auto uniform = evaluate_policy(model, StochasticPolicy::uniform(H, model.num_states(), A));
            const double gap = eps * static_cast<double>(H - 1);
            for (auto s : env.initial.states()) {
              const auto q = action_values(model, s, opt.values[1]);
              const double best = *std::max_element(q.begin(), q.end());
              for (std::size_t a = 0; a < A; ++a) {
                if (q[a] == best) continue;
                worst_gap = std::max(worst_gap, std::abs(best - q[a] - gap));
              }
              const auto specials = static_cast<std::size_t>(std::count(q.begin(), q.end(), best));
              if (specials != 1) worst_gap = INFINITY;
              const double regret = opt.values[0][s] - uniform[0][s];
              const double expected = gap * static_cast<double>(A - 1) / static_cast<double>(A);
              worst_uniform = std::max(worst_uniform, std::abs(regret - expected));
            }
            ++cases;
          }
        }
      }
    }
    return CheckResult{"", worst_gap <= tolerance && worst_uniform <= tolerance,
                       std::to_string(cases) + " instances, max gap error " + fmt(worst_gap, 3) +
                           ", max uniform-regret error " + fmt(worst_uniform, 3),
                       0.0};
  });
}

CheckResult check_determinism() {
  return timed("determinism", [&] {
    const std::vector<std::string> configs{
        "[environment]\nspec = benchmark\n[agent]\nkind = f_euler\nreward_mode = unknown\n"
        "[run]\nepisodes = 200\nseeds = 3 1 4\n",
        "[environment]\nspec = jao:delta=0.25,eps=0.1,copies=2,H=6\n[agent]\nkind = l1_baseline\n"
        "[run]\nepisodes = 300\nseeds = 0 9\n",
        "[environment]\nspec = random:m=3,S=2,A=3,H=4,seed=5\n[agent]\nkind = f_ucbvi\n"
        "reward_mode = unknown\nvariance_convention = biased\n[run]\nepisodes = 150\nseeds = 7\n",
    };
    std::size_t compared = 0;
    std::size_t differing = 0;
    for (const auto& text : configs) {
      const auto config = parse_config_or_throw(text);
      const auto a = scratch_directory("det_a");
      const auto b = scratch_directory("det_b");
      RunOptions first;
      first.output = a;
      RunOptions second;
      second.output = b;
      second.jobs = 3;
      const auto ra = run_experiment(config, first);
      const auto rb = run_experiment(config, second);
      auto files_a = ra.seed_files;
      files_a.push_back(ra.summary_file);
      auto files_b = rb.seed_files;
      files_b.push_back(rb.summary_file);
      for (std::size_t i = 0; i < files_a.size(); ++i) {
        ++compared;
        if (read_text_file(files_a[i]) != read_text_file(files_b[i])) ++differing;
      }
      std::error_code ec;
      std::filesystem::remove_all(a, ec);
      std::filesystem::remove_all(b, ec);
    }
    return CheckResult{"", differing == 0,
                       std::to_string(compared) + " files compared, " + std::to_string(differing) +
                           " differ",
                       0.0};
  });
}

CheckResult check_planner_bounds(std::size_t instances, std::uint64_t seed) {
  return timed("planner_bounds", [&] {
    Rng rng(derive_seed(seed, 0x91a0));
    std::size_t violations = 0;
    for (std::size_t n = 0; n < instances; ++n) {
      RandomFmdpParams p;
      p.state_sizes = {2 + rng.below(2), 2 + rng.below(2)};
      p.action_sizes = {2 + rng.below(2)};
      p.transition_scopes = {ScopeIndexSet({0, 2}), ScopeIndexSet({0, 1, 2})};
      p.reward_scopes = {ScopeIndexSet({1, 2})};
      p.horizon = 2 + rng.below(4);
      p.reward_known = n % 2 == 0;
      auto env = make_environment("r", make_random_fmdp(p, rng), InitialStateRule::fixed(0));
      auto config = make_agent(n % 3 == 0 ? AgentKind::f_euler
                                          : (n % 3 == 1 ? AgentKind::f_ucbvi : AgentKind::l1_baseline),
                               p.reward_known);
      config.episodes = 30;
      config.seed = n;
      config.track_lcb = true;
      const double H = static_cast<double>(p.horizon);
      run_episodes(env, config, [&](std::size_t, const ValueBounds& b) {
        for (std::size_t t = 0; t < b.ucb.size(); ++t) {
          for (std::size_t s = 0; s < b.ucb[t].size(); ++s) {
            const double cap = H - static_cast<double>(t);
            if (b.ucb[t][s] < 0.0 || b.ucb[t][s] > cap) ++violations;
            if (b.lcb[t][s] < 0.0 || b.lcb[t][s] > b.ucb[t][s]) ++violations;
          }
        }
        for (std::size_t s = 0; s < b.ucb.back().size(); ++s) {
          if (b.ucb.back()[s] != 0.0 || b.lcb.back()[s] != 0.0) ++violations;
        }
      });
    }
    return CheckResult{"", violations == 0,
                       std::to_string(instances) + " instances, " + std::to_string(violations) +
                           " violations of 0 <= lcb <= ucb <= H - h + 1",
                       0.0};
  });
}

CheckResult check_optimal_dominates_policies(std::size_t instances, std::uint64_t seed) {
  return timed("optimal_dominates_policies", [&] {
    Rng rng(derive_seed(seed, 0x0d0e));
    std::size_t violations = 0;
    for (std::size_t n = 0; n < instances; ++n) {
      RandomFmdpParams p;
      p.state_sizes = {2, 3};
      p.action_sizes = {2, 2};
      p.transition_scopes = {ScopeIndexSet({0, 1, 2}), ScopeIndexSet({1, 3})};
      p.reward_scopes = {ScopeIndexSet({0, 2}), ScopeIndexSet({1, 3})};
      p.horizon = 1 + rng.below(5);
      const auto model = make_random_fmdp(p, rng);
      const auto opt = exact_value_iteration(model);
      const auto self = evaluate_policy(model, opt.policy);
      for (std::size_t trial = 0; trial < 5; ++trial) {
        DeterministicPolicy policy(p.horizon, model.num_states());
        for (std::size_t t = 0; t < p.horizon; ++t) {
          for (std::size_t s = 0; s < model.num_states(); ++s) {
            policy.set(t, s, rng.below(model.num_actions()));
          }
        }
        const auto values = evaluate_policy(model, policy);
        for (std::size_t s = 0; s < model.num_states(); ++s) {
          if (values[0][s] > opt.values[0][s] + 1e-12) ++violations;
        }
      }
      for (std::size_t s = 0; s < model.num_states(); ++s) {
        if (std::abs(self[0][s] - opt.values[0][s]) > 1e-12) ++violations;
      }
    }
    return CheckResult{"", violations == 0,
                       std::to_string(instances) + " instances, " + std::to_string(violations) +
                           " violations",
                       0.0};
  });
}

CheckResult check_chain_values() {
  return timed("chain_values", [&] {
    const auto env = make_chain(2);
    const auto& model = *env.model;
    const auto opt = exact_value_iteration(model);
    const bool exact_ok = opt.values[1][1] == 1.0 && opt.values[0][1] == 2.0 &&
                          opt.values[0][0] == 1.0;
    // Saturated counters that reproduce the true kernel.
    EstimatorState estimates(model);
    const std::uint64_t N = 1ULL << 50;
    std::vector<std::uint64_t> visits(model.num_pairs(), N);
    std::vector<std::uint64_t> successors(model.num_pairs() * 2, 0);
    for (std::size_t pair = 0; pair < model.num_pairs(); ++pair) {
      const auto row = model.component_row(0, pair);
      for (std::size_t v = 0; v < 2; ++v) {
        successors[pair * 2 + v] = row[v] == 1.0 ? N : 0;
      }
    }
    estimates.restore_transition_counts(0, visits, successors);
    PlannerOptions options;
    options.L = 1.0;
    const auto bounds = vi_optimism(model, estimates, options);
    double worst = 0.0;
    for (std::size_t s = 0; s < 2; ++s) worst = std::max(worst, std::abs(bounds.ucb[0][s] - opt.values[0][s]));
    return CheckResult{"", exact_ok && worst < 1e-5 && bounds.policy == opt.policy,
                       "V*_1 = (" + fmt(opt.values[0][0]) + ", " + fmt(opt.values[0][1]) +
                           "), saturated ucb error " + fmt(worst, 3),
                       0.0};
  });
}

CheckResult check_monte_carlo_policy_value(std::size_t episodes, std::uint64_t seed) {
  return timed("monte_carlo_policy_value", [&] {
    const auto env = make_benchmark_fmdp();
    const auto& model = *env.model;
    const auto H = model.horizon();
    const auto uniform = StochasticPolicy::uniform(H, model.num_states(), model.num_actions());
    const auto exact = evaluate_policy(model, uniform);
    const auto s1 = env.initial.states()[0];
    // Sample the Bernoulli reward components so the estimate sees the noise.
    EpisodicEnv sim(with_reward_mode(env, false), seed);
    Rng policy_rng(derive_seed(seed, 0x3c3c));
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t k = 0; k < episodes; ++k) {
      sim.reset();
      double ret = 0.0;
      for (std::size_t t = 0; t < H; ++t) ret += sim.step(policy_rng.below(model.num_actions())).total_reward;
      sum += ret;
      sum_sq += ret * ret;
    }
    const double n = static_cast<double>(episodes);
    const double mean = sum / n;
    const double sd = std::sqrt(std::max(0.0, sum_sq / n - mean * mean) / n);
    const double z = std::abs(mean - exact[0][s1]) / sd;
    return CheckResult{"", z <= 3.0,
                       "simulated " + fmt(mean, 6) + " vs exact " + fmt(exact[0][s1], 6) + " (" +
                           fmt(z, 3) + " sigma)",
                       0.0};
  });
}

CheckResult check_zero_gap_regret() {
  return timed("zero_gap_regret", [&] {
    double worst = 0.0;
    for (auto kind : {AgentKind::f_ucbvi, AgentKind::f_euler, AgentKind::l1_baseline}) {
      for (bool known : {true, false}) {
        auto config = make_agent(kind, known);
        config.episodes = 200;
        config.seed = 11;
        const auto curve = run_episodes(environment_from_spec("mab_like:eps=0,A=3,H=4"), config).curve;
        worst = std::max(worst, std::abs(curve.total()));
      }
    }
    return CheckResult{"", worst <= 1e-9,
                       "max |cumulative regret| with eps = 0: " + fmt(worst, 3), 0.0};
  });
}

CheckResult check_loop_construction() {
  return timed("loop_construction", [&] {
    double worst = 0.0;
    for (std::size_t u : {1, 2, 3}) {
      LoopParams p;
      p.loop_length = u;
      p.component_sizes.assign(u, 2);
      p.component_sizes.back() = 4;
      p.action_sizes = {3};
      p.epsilon = 0.15;
      p.base = 0.4;
      p.horizon = 6;
      const auto env = make_loop_fmdp(p);
      const auto& model = *env.model;
      const auto opt = exact_value_iteration(model);
      const double H1 = static_cast<double>(p.horizon - 1);
      for (auto s : env.initial.states()) {
        worst = std::max(worst, std::abs(opt.values[0][s] - H1 * (p.base + p.epsilon)));
        const auto q = action_values(model, s, opt.values[1]);
        const auto v = model.state_space().tuple_of(s).back();
        for (std::size_t a = 0; a < q.size(); ++a) {
          const bool special = a == (v - 2) % model.num_actions();
          const double expected = H1 * (p.base + (special ? p.epsilon : 0.0));
          worst = std::max(worst, std::abs(q[a] - expected));
        }
      }
    }
    return CheckResult{"", worst <= 1e-10, "max error against (H-1)(base + eps) " + fmt(worst, 3),
                       0.0};
  });
}

std::vector<std::string> suite_names() {
  return {"invariants", "optimism", "lowerbound", "oracle", "regret"};
}

SuiteReport run_suite(std::string_view name, const SuiteOptions& options) {
  SuiteReport report{std::string(name), {}};
  auto& c = report.checks;
  if (name == "invariants") {
    c.push_back(check_inverse_telescoping(1000, 1));
    c.push_back(check_component_variance_bound(1000, 2));
    c.push_back(check_single_component_reduction());
    c.push_back(check_planner_bounds(60, 3));
    c.push_back(check_optimal_dominates_policies(40, 4));
    c.push_back(check_zero_gap_regret());
    c.push_back(check_determinism());
  } else if (name == "optimism") {
    c.push_back(check_empirical_optimism(100, 2000, 90, options.jobs));
  } else if (name == "lowerbound") {
    c.push_back(check_mab_like_gaps());
    c.push_back(check_jao_occupancy(100000, 5));
    c.push_back(check_loop_construction());
  } else if (name == "oracle") {
    c.push_back(check_jao_optimal_value());
    c.push_back(check_chain_values());
    c.push_back(check_monte_carlo_policy_value(100000, 6));
  } else if (name == "regret") {
    c.push_back(check_sublinear_regret(10, 20000, 9, 1.0 / 3.0, options.jobs));
    c.push_back(check_factorization_advantage(10, 20000, 8, options.jobs));
    c.push_back(check_euler_not_worse(10, 20000, 1.5, options.jobs));
  } else {
    throw ConfigError("unknown suite '" + std::string(name) +
                      "' (valid: invariants, optimism, lowerbound, oracle, regret)");
  }
  return report;
}

std::string format_report(const SuiteReport& report) {
  std::string out;
  for (const auto& check : report.checks) {
    out += (check.passed ? "PASS " : "FAIL ") + report.suite + "/" + check.name + " " +
           check.detail + " [" + fmt(check.seconds, 3) + "s]\n";
  }
  return out;
}

}  // namespace fmdp
