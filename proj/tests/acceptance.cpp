// Acceptance suite: one checkable criterion per headline claim, each
// printing a single [PASS]/[FAIL] line. Run with no arguments for the whole
// suite or with a criterion number (1-8) for one entry. The exit code is the
// number of failed criteria.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "circlesim/angle.hpp"
#include "circlesim/scenario.hpp"
#include "test_helpers.hpp"

using namespace circlesim;
using namespace circlesim::testing;

namespace {

const auto P = SubsystemLabel::Preparer;
const auto S = SubsystemLabel::System;
const auto G = SubsystemLabel::GrandPreparer;
const auto M = SubsystemLabel::Meter;

struct Checker {
  bool ok = true;
  std::vector<std::string> notes;

  void require(bool condition, const std::string& what) {
    if (!condition) {
      ok = false;
      notes.push_back("unmet: " + what);
    }
  }
  void info(const std::string& what) { notes.push_back(what); }
  void require_runtime(std::chrono::steady_clock::time_point start,
                       double limit_seconds, const std::string& what) {
    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s: %.3f s (limit %g s)", what.c_str(),
                  elapsed, limit_seconds);
    if (elapsed < limit_seconds)
      info(buf);
    else
      require(false, buf);
  }
};

ModeWavefunction two_level(int dim) {
  return superposition(dim, {{-1, 1.0}, {1, 1.0}});
}

// --- 1. Collapse probabilities -------------------------------------------

void criterion_collapse(Checker& c) {
  auto balanced = pointer_couple(
      tensor({{S, two_level(7)}, {M, basis_state(7, 0)}}), S, M);
  auto skewed = pointer_couple(
      tensor({{S, superposition(7, {{-1, std::sqrt(0.9)},
                                    {1, std::sqrt(0.1)}})},
              {M, basis_state(7, 0)}}),
      S, M);

  auto start = std::chrono::steady_clock::now();
  auto balanced_records = outcome_table(balanced, M);
  auto skewed_records = outcome_table(skewed, M);
  c.require_runtime(start, 1e-3, "two outcome tables");

  c.require(balanced_records.size() == 2, "two outcomes for |alpha|^2 = 1/2");
  for (const auto& r : balanced_records)
    c.require(near(r.probability, 0.5, 1e-12),
              "balanced outcome probability 0.5 within 1e-12");
  c.require(skewed_records.size() == 2, "two outcomes for |alpha|^2 = 0.9");
  c.require(near(skewed_records[0].probability, 0.9, 1e-12),
            "skewed outcome probability 0.9 within 1e-12");
  c.require(near(skewed_records[1].probability, 0.1, 1e-12),
            "skewed outcome probability 0.1 within 1e-12");
}

// --- 2. Per-outcome conservation ------------------------------------------

void criterion_per_outcome(Checker& c) {
  auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(0xC0115E57ull);
  double worst = 0.0;
  for (int scenario = 0; scenario < 100; ++scenario) {
    int dim = 8 + static_cast<int>(rng() % 25);  // 8..32
    int hw_s = static_cast<int>(rng() % 3);
    int hw_p = static_cast<int>(rng() % (window_hi(dim) - hw_s + 1));
    auto phi_p = random_mode(rng, dim, hw_p);
    auto psi = random_mode(rng, dim, hw_s);

    auto initial = tensor({{P, phi_p}, {S, basis_state(dim, 0)}});
    WrapGuard guard(WrapPolicy::kError);
    auto ledger = build_ledger(initial, {ShiftPrepare{P, S, psi}}, S, {P, S},
                               &guard);
    worst = std::max(worst, ledger.max_deviation());
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "largest ledger deviation: %.3e", worst);
  c.info(buf);
  c.require(worst <= 1e-10,
            "every per-outcome deviation <= 1e-10 over 100 random scenarios");
  c.require_runtime(start, 10.0, "100 randomized ledgers");
}

// --- 3. Preparer / grand-preparer closed forms ----------------------------

double report_difference(const ChainReport& a, const ChainReport& b) {
  double d = max_abs_difference(a.preparer_at_prep, b.preparer_at_prep);
  d = std::max(
      d, max_abs_difference(a.preparer_post_measure, b.preparer_post_measure));
  d = std::max(d, max_abs_difference(a.grandpreparer_at_prep,
                                     b.grandpreparer_at_prep));
  d = std::max(d, max_abs_difference(a.grandpreparer_post_measure,
                                     b.grandpreparer_post_measure));
  return d;
}

int likely_outcome(std::mt19937_64& rng, const ModeWavefunction& psi) {
  std::vector<int> viable;
  for (const auto& [m, a] : psi.support())
    if (std::norm(a) > 1e-3) viable.push_back(m);
  return viable[rng() % viable.size()];
}

void criterion_chain_closed_forms(Checker& c) {
  auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(0x7AB1E1ull);
  double worst = 0.0;
  for (int tuple = 0; tuple < 50; ++tuple) {
    int dim = 12 + static_cast<int>(rng() % 21);  // 12..32
    int hi = window_hi(dim);
    int hw_s = static_cast<int>(rng() % 3);
    int hw_p = static_cast<int>(rng() % std::min(4, hi - hw_s + 1));
    int hw_g = static_cast<int>(rng() % (hi - hw_p + 1));
    auto phi_g = random_mode(rng, dim, hw_g);
    auto phi_p = random_mode(rng, dim, hw_p);
    auto psi = random_mode(rng, dim, hw_s);
    int l0 = likely_outcome(rng, psi);

    auto simulated = chain_report(phi_g, phi_p, psi, l0);
    auto oracle = table1_oracle(phi_g, phi_p, l0);
    worst = std::max(worst, report_difference(simulated, oracle));
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "largest closed-form deviation: %.3e", worst);
  c.info(buf);
  c.require(worst <= 1e-10,
            "chain report equals the closed forms over 50 random tuples");

  // The grand-preparer's distribution is untouched by what the system does:
  // vary the system profile and the measured value with the other profiles
  // held fixed.
  double invariance = 0.0;
  for (int rep = 0; rep < 5; ++rep) {
    int dim = 17;
    auto phi_g = random_mode(rng, dim, 3);
    auto phi_p = random_mode(rng, dim, 2);
    bool first = true;
    LatticeDistribution reference{0, {}};
    for (int variant = 0; variant < 3; ++variant) {
      auto psi = random_mode(rng, dim, 2);
      for (const auto& [l0, a] : psi.support()) {
        if (std::norm(a) <= 1e-3) continue;
        auto report = chain_report(phi_g, phi_p, psi, l0);
        if (first) {
          reference = report.grandpreparer_post_measure;
          first = false;
        } else {
          invariance = std::max(
              invariance, max_abs_difference(
                              reference, report.grandpreparer_post_measure));
        }
      }
    }
  }
  std::snprintf(buf, sizeof buf,
                "grand-preparer variation across system choices: %.3e",
                invariance);
  c.info(buf);
  c.require(invariance <= 1e-10,
            "grand-preparer distribution independent of the system profile "
            "and measured value");
  c.require_runtime(start, 10.0, "chain closed forms");
}

// --- 4. Frame factorization ------------------------------------------------

void criterion_frame(Checker& c) {
  auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(0xF4A3ull);
  double worst = 0.0;
  for (int pair = 0; pair < 50; ++pair) {
    int dim = 8 + static_cast<int>(rng() % 25);  // 8..32
    int hw_s = static_cast<int>(rng() % 3);
    int hw_p = static_cast<int>(rng() % (window_hi(dim) - hw_s + 1));
    auto phi_p = random_mode(rng, dim, hw_p);
    auto psi = random_mode(rng, dim, hw_s);
    auto state = shift_prepare(
        tensor({{P, phi_p}, {S, basis_state(dim, 0)}}), P, S, psi);
    worst =
        std::max(worst, frame_factorization_residual(state, P, S, psi));
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "largest factorization residual: %.3e",
                worst);
  c.info(buf);
  c.require(worst <= 1e-9,
            "residual <= 1e-9 for 50 random shift-prepared states");

  // Control: rotating the system alone breaks the frame-relative form.
  auto psi = two_level(16);
  auto prepared = shift_prepare(
      tensor({{P, uniform_window(16, -3, 3)}, {S, basis_state(16, 0)}}),
      P, S, psi);
  double control =
      frame_factorization_residual(rotate_label(prepared, S, 0.9), P, S, psi);
  std::snprintf(buf, sizeof buf, "rotated-system control residual: %.3f",
                control);
  c.info(buf);
  c.require(control > 0.1, "independent rotation pushes the residual past 0.1");
  c.require_runtime(start, 10.0, "frame factorization sweep");
}

// --- 5. Meter neutrality ----------------------------------------------------

void criterion_meter(Checker& c) {
  std::mt19937_64 rng(0x3E7E4ull);
  double worst = 0.0;
  bool all_ok = true;
  for (int scenario = 0; scenario < 20; ++scenario) {
    int dim = 5 + static_cast<int>(rng() % 12);
    auto source = random_mode(rng, dim, window_hi(dim));
    auto initial = tensor({{S, source}, {M, basis_state(dim, 0)}});
    auto coupled = pointer_couple(initial, S, M);
    auto check = meter_untouched_check(initial, coupled, M);
    all_ok = all_ok && check.ok;
    worst = std::max(worst, check.max_deviation);
  }
  // The bundled pointer scenario reports the same verdict.
  auto report = run_scenario(parse_scenario(
      nlohmann::json::parse(bundled_scenario_json("sec3_meter"))));
  all_ok = all_ok && report.json["meter"]["untouched"].get<bool>();
  worst = std::max(worst, report.json["meter"]["deviation"].get<double>());

  char buf[96];
  std::snprintf(buf, sizeof buf, "largest meter deviation: %.1e", worst);
  c.info(buf);
  c.require(all_ok && worst == 0.0,
            "meter untouched with deviation exactly 0 in every pointer "
            "coupling");

  // Counterexample: a unitary that kicks angular momentum into the system
  // while posing as a readout.
  auto initial = tensor({{S, two_level(9)}, {M, basis_state(9, 0)}});
  auto kicked = kick_label(pointer_couple(initial, S, M), S, 1);
  auto bad = meter_untouched_check(initial, kicked, M);
  c.require(!bad.ok, "meter-kicking counterexample is rejected");
}

// --- 6. Residual entanglement structure ------------------------------------

// Closed-form fidelity of the prepared system to the two-level target when
// the preparer profile is a uniform window of `width` points:
// sum_{m,m'} |psi(m)|^2 |psi(m')|^2 * max(0, width - |m-m'|) / width.
double overlap_oracle_fidelity(int width) {
  double f = 0.0;
  for (int m : {-1, 1})
    for (int mp : {-1, 1})
      f += 0.25 * std::max(0, width - std::abs(m - mp)) /
           static_cast<double>(width);
  return f;
}

void criterion_residual_entanglement(Checker& c) {
  std::mt19937_64 rng(0x0FF5E7ull);
  double worst = 0.0;
  for (int scenario = 0; scenario < 20; ++scenario) {
    int dim = 9 + static_cast<int>(rng() % 16);
    int hw_s = 1 + static_cast<int>(rng() % 2);
    int hw_p = static_cast<int>(rng() % (window_hi(dim) - hw_s + 1));
    auto phi_p = random_mode(rng, dim, hw_p);
    auto psi = random_mode(rng, dim, hw_s, 0.25);
    auto state = shift_prepare(
        tensor({{P, phi_p}, {S, basis_state(dim, 0)}}), P, S, psi);
    auto offsets = branch_mean_offsets(state, S, P);
    for (const auto& [m1, mu1] : offsets)
      for (const auto& [m2, mu2] : offsets)
        worst = std::max(worst, std::abs((mu2 - mu1) + (m2 - m1)));
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "largest branch-offset error: %.3e", worst);
  c.info(buf);
  c.require(worst <= 1e-10,
            "conditional frame means differ by -(m2 - m1) in 20 random "
            "scenarios");

  // Fidelity of the prepared system state against the target, as the
  // preparer's uniform window widens.
  const int dim = 31;
  auto psi = two_level(dim);
  std::vector<int> widths{1, 3, 5, 9, 15};
  std::vector<double> fidelities;
  for (int width : widths) {
    int lo = -(width - 1) / 2;
    auto phi_p = uniform_window(dim, lo, lo + width - 1);
    auto rho = reduced_density(
        shift_prepare(tensor({{P, phi_p}, {S, basis_state(dim, 0)}}), P, S,
                      psi),
        S);
    double f = fidelity_to(psi, rho);
    fidelities.push_back(f);
    c.require(near(f, overlap_oracle_fidelity(width), 1e-10),
              "fidelity at width " + std::to_string(width) +
                  " matches the overlap oracle");
  }
  std::snprintf(buf, sizeof buf,
                "fidelities at widths 1,3,5,9,15: %.4f %.4f %.4f %.4f %.4f",
                fidelities[0], fidelities[1], fidelities[2], fidelities[3],
                fidelities[4]);
  c.info(buf);
  for (size_t i = 1; i < fidelities.size(); ++i)
    c.require(fidelities[i] >= fidelities[i - 1] - 1e-12,
              "fidelity non-decreasing in the window width");

  std::snprintf(buf, sizeof buf,
                "fidelity at width 15 is %.6f; required >= 0.99, but the "
                "overlap oracle gives 1 - 1/width = %.6f (0.99 needs width "
                ">= 100)",
                fidelities.back(), overlap_oracle_fidelity(15));
  c.require(fidelities.back() >= 0.99, buf);

  // The approach to the pure target continues: at width 100 the oracle
  // value 0.99 is reached exactly.
  const int big = 203;
  auto psi_big = two_level(big);
  auto rho_big = reduced_density(
      shift_prepare(tensor({{P, uniform_window(big, -50, 49)},
                            {S, basis_state(big, 0)}}),
                    P, S, psi_big),
      S);
  double f100 = fidelity_to(psi_big, rho_big);
  std::snprintf(buf, sizeof buf, "fidelity at width 100: %.6f", f100);
  c.info(buf);
  c.require(near(f100, overlap_oracle_fidelity(100), 1e-10) && f100 >= 0.99,
            "width-100 window reaches fidelity 0.99");
}

// --- 7. Interaction verifiers -----------------------------------------------

void criterion_verifiers(Checker& c) {
  std::mt19937_64 rng(0x5A1AD5ull);
  double worst_unitarity = 0.0;
  bool all_ok = true;
  for (int dim = 2; dim <= 12; ++dim) {
    std::map<SubsystemLabel, int> dims{{P, dim}, {S, dim}, {M, dim}};
    std::vector<InteractionKind> kinds{
        ShiftPrepare{P, S, random_mode(rng, dim, window_hi(dim))},
        ShiftPrepare{P, S, basis_state(dim, std::min(1, dim - 1))},
        PointerCouple{S, M}, SwapStates{P, S}};
    if (dim >= 3) kinds.push_back(ShiftPrepare{P, S, two_level(dim)});
    for (const auto& kind : kinds) {
      auto unitary = verify_unitary(kind, dims);
      auto conserving = verify_conserves_total_L(kind, dims);
      all_ok = all_ok && unitary.ok && conserving.ok;
      worst_unitarity = std::max(worst_unitarity, unitary.max_deviation);
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "largest unitarity deviation: %.3e",
                worst_unitarity);
  c.info(buf);
  c.require(all_ok && worst_unitarity <= 1e-12,
            "all interactions unitary and conserving for every D <= 12");

  // An unnormalized profile must be rejected.
  std::vector<Complex> short_amps(7, Complex(0.0));
  short_amps[window_index(-1, 7)] = Complex(0.9 / std::sqrt(2.0));
  short_amps[window_index(1, 7)] = Complex(0.9 / std::sqrt(2.0));
  auto bad = verify_unitary(
      ShiftPrepare{P, S, ModeWavefunction(7, short_amps)}, {{P, 7}, {S, 7}});
  c.require(!bad.ok, "norm-0.9 profile fails the unitarity check");

  // A unitary that adds +1 to the system unconditionally must be rejected
  // with a genuine witness.
  int dim = 7;
  InteractionMatrix kick{{Factor{S, dim, true}, Factor{P, dim, true}}, {}};
  kick.matrix = Eigen::MatrixXcd::Zero(dim * dim, dim * dim);
  for (long col = 0; col < dim * dim; ++col) {
    BasisTuple in = kick.tuple_of(col);
    kick.matrix(kick.index_of({canonical(in[0] + 1, dim), in[1]}), col) = 1.0;
  }
  c.require(verify_unitary(kick.matrix).ok,
            "the kick counterexample is itself unitary");
  auto check = verify_conserves_total_L(kick);
  c.require(!check.ok && check.witness.has_value(),
            "unconditional +1 kick rejected with a witness");
  if (check.witness) {
    BasisTuple w = *check.witness;
    long col = kick.index_of(w);
    bool genuine = false;
    for (long r = 0; r < dim * dim; ++r) {
      if (std::abs(kick.matrix(r, col)) <= 1e-12) continue;
      BasisTuple out = kick.tuple_of(r);
      genuine = genuine || canonical(out[0] + out[1], dim) !=
                               canonical(w[0] + w[1], dim);
    }
    c.require(genuine, "the returned witness actually changes the total");
  }
}

// --- 8. Sampling consistency -----------------------------------------------

void criterion_sampling(Checker& c) {
  auto config = parse_scenario(
      nlohmann::json::parse(bundled_scenario_json("sec4_two_level")));
  config.sample_mode = true;
  config.trials = 100000;
  config.seed = 20240814;

  auto report = run_scenario(config);
  for (const auto& row : report.json["outcomes"]) {
    double p = row["probability"].get<double>();
    double f = row["frequency"].get<double>();
    double sigma = std::sqrt(p * (1.0 - p) / config.trials);
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "outcome %d: frequency %.5f vs probability %.5f (3 sigma "
                  "%.5f)",
                  row["value"].get<int>(), f, p, 3.0 * sigma);
    c.info(buf);
    c.require(near(f, p, 3.0 * sigma),
              "sampled frequency within 3 sigma of the exact probability");
  }

  std::ostringstream first, second;
  emit_report(run_scenario(config), ReportFormat::kJson, first);
  emit_report(run_scenario(config), ReportFormat::kJson, second);
  c.require(!first.str().empty() && first.str() == second.str(),
            "identical seed reproduces identical report bytes");
}

struct Criterion {
  int id;
  const char* title;
  std::function<void(Checker&)> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {1, "collapse probabilities from the pointer readout",
       criterion_collapse},
      {2, "per-outcome conservation over preparer+system", criterion_per_outcome},
      {3, "preparer and grand-preparer closed-form distributions",
       criterion_chain_closed_forms},
      {4, "frame-relative factorization in the angle basis", criterion_frame},
      {5, "meter neutrality", criterion_meter},
      {6, "residual entanglement structure", criterion_residual_entanglement},
      {7, "interaction verifiers (unitarity and conservation)",
       criterion_verifiers},
      {8, "seeded sampling consistency", criterion_sampling},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);
  int failures = 0;
  for (const auto& criterion : criteria()) {
    if (only != 0 && criterion.id != only) continue;
    Checker checker;
    try {
      criterion.run(checker);
    } catch (const std::exception& e) {
      checker.ok = false;
      checker.notes.push_back(std::string("exception: ") + e.what());
    }
    std::printf("[%s] criterion %d: %s\n", checker.ok ? "PASS" : "FAIL",
                criterion.id, criterion.title);
    for (const auto& note : checker.notes)
      std::printf("        %s\n", note.c_str());
    if (!checker.ok) ++failures;
  }
  return failures;
}
