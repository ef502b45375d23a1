#include "circlesim/scenario.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "circlesim/angle.hpp"

namespace circlesim {

namespace {

constexpr const char* kRngNote =
    "mt19937_64, 53-bit uniform; trial_seed(t) = splitmix64(seed + (t+1) * "
    "0x9E3779B97F4A7C15)";

SubsystemLabel parse_role(const std::string& role) {
  if (role == "system") return SubsystemLabel::System;
  if (role == "preparer") return SubsystemLabel::Preparer;
  if (role == "grand_preparer") return SubsystemLabel::GrandPreparer;
  if (role == "meter") return SubsystemLabel::Meter;
  throw ConfigError("unknown role '" + role + "'");
}

const nlohmann::json& field(const nlohmann::json& obj, const char* key,
                            const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw ConfigError(where + ": missing field '" + key + "'");
  return *it;
}

ModeWavefunction parse_profile(const nlohmann::json& spec, int dim,
                               const std::string& where) {
  if (!spec.is_object())
    throw ConfigError(where + ": profile must be an object");
  std::string kind = field(spec, "profile", where).get<std::string>();
  try {
    if (kind == "basis")
      return basis_state(dim, field(spec, "l", where).get<int>());
    if (kind == "uniform") {
      auto window = field(spec, "window", where);
      return uniform_window(dim, window.at(0).get<int>(),
                            window.at(1).get<int>());
    }
    if (kind == "gaussian_like")
      return gaussian_like(dim, field(spec, "center", where).get<int>(),
                           field(spec, "width", where).get<double>());
    if (kind == "superposition") {
      std::map<int, Complex> terms;
      for (const auto& term : field(spec, "terms", where)) {
        auto amp = field(term, "amp", where);
        terms[field(term, "l", where).get<int>()] +=
            Complex(amp.at(0).get<double>(), amp.at(1).get<double>());
      }
      return superposition(dim, terms);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  }
  throw ConfigError(where + ": unknown profile '" + kind + "'");
}

// Inclusive integer interval of possible quantum numbers, for the load-time
// support-fit check.
struct Interval {
  int lo = 0, hi = 0;
};

void check_support_fit(const ScenarioConfig& config) {
  std::map<SubsystemLabel, Interval> extents;
  for (const auto& [label, psi] : config.initial) {
    auto [a, b] = psi.support_window();
    extents[label] = {a, b};
  }
  int step_no = 0;
  for (const auto& kind : config.chain) {
    ++step_no;
    std::string where = "chain[" + std::to_string(step_no - 1) + "]";
    std::visit(
        [&](const auto& k) {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, ShiftPrepare>) {
            auto [plo, phi] = k.profile.support_window();
            Interval src = extents[k.source];
            extents[k.source] = {src.lo - phi, src.hi - plo};
            extents[k.target] = {plo, phi};
          } else if constexpr (std::is_same_v<T, PointerCouple>) {
            extents[k.meter] = extents[k.source];
          } else {
            std::swap(extents[k.a], extents[k.b]);
          }
        },
        kind);
    for (const auto& [label, ext] : extents) {
      int dim = config.dims.at(label);
      if (ext.lo < window_lo(dim) || ext.hi > window_hi(dim)) {
        std::string what =
            where + ": declared support of " + to_string(label) +
            " reaches [" + std::to_string(ext.lo) + ", " +
            std::to_string(ext.hi) + "] outside the canonical window of D=" +
            std::to_string(dim);
        if (config.wrap_policy == WrapPolicy::kError) throw WrapError(what);
        std::fprintf(stderr, "warning: support-fit: %s\n", what.c_str());
      }
    }
  }
}

const ShiftPrepare* as_shift(const InteractionKind& kind) {
  return std::get_if<ShiftPrepare>(&kind);
}

void check_table1_pattern(const ScenarioConfig& config) {
  const auto G = SubsystemLabel::GrandPreparer;
  const auto P = SubsystemLabel::Preparer;
  const auto S = SubsystemLabel::System;
  std::string why;
  if (!config.dims.count(G) || !config.dims.count(P) || !config.dims.count(S))
    why = "needs grand_preparer, preparer and system labels";
  else if (config.chain.size() != 2)
    why = "needs a two-step shift_prepare chain";
  else {
    const ShiftPrepare* first = as_shift(config.chain[0]);
    const ShiftPrepare* second = as_shift(config.chain[1]);
    if (!first || first->source != G || first->target != P ||
        !second || second->source != P || second->target != S)
      why = "chain must shift-prepare grand_preparer->preparer then "
            "preparer->system";
  }
  if (!why.empty()) throw ConfigError("table1_l0: " + why);
}

}  // namespace

ScenarioConfig parse_scenario(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("config root must be an object");
  ScenarioConfig config;
  config.echo = doc;
  config.name = field(doc, "name", "config").get<std::string>();
  if (doc.contains("description"))
    config.description = doc["description"].get<std::string>();

  for (const auto& entry : field(doc, "labels", "config")) {
    std::string role = field(entry, "role", "labels").get<std::string>();
    SubsystemLabel label = parse_role(role);
    if (config.dims.count(label))
      throw ConfigError("labels: duplicate role '" + role + "'");
    int dim = field(entry, "dim", "labels[" + role + "]").get<int>();
    if (dim <= 0)
      throw ConfigError("labels[" + role + "]: dim must be positive");
    config.labels.push_back(label);
    config.dims[label] = dim;
    config.initial.emplace(
        label, parse_profile(field(entry, "state", "labels[" + role + "]"),
                             dim, "labels[" + role + "].state"));
  }
  if (config.labels.empty()) throw ConfigError("labels: none declared");

  auto known = [&](const std::string& role, const std::string& where) {
    SubsystemLabel label = parse_role(role);
    if (!config.dims.count(label))
      throw ConfigError(where + ": label '" + role + "' not declared");
    return label;
  };

  int step_no = 0;
  for (const auto& step : field(doc, "chain", "config")) {
    std::string where = "chain[" + std::to_string(step_no++) + "]";
    std::string kind = field(step, "kind", where).get<std::string>();
    if (kind == "shift_prepare") {
      SubsystemLabel source =
          known(field(step, "source", where).get<std::string>(), where);
      SubsystemLabel target =
          known(field(step, "target", where).get<std::string>(), where);
      if (source == target)
        throw ConfigError(where + ": source equals target");
      config.chain.push_back(ShiftPrepare{
          source, target,
          parse_profile(field(step, "profile", where),
                        config.dims.at(source), where + ".profile")});
    } else if (kind == "pointer_couple") {
      config.chain.push_back(PointerCouple{
          known(field(step, "source", where).get<std::string>(), where),
          known(field(step, "meter", where).get<std::string>(), where)});
    } else if (kind == "swap") {
      config.chain.push_back(SwapStates{
          known(field(step, "a", where).get<std::string>(), where),
          known(field(step, "b", where).get<std::string>(), where)});
    } else {
      throw ConfigError(where + ": unknown kind '" + kind + "'");
    }
  }

  config.measure =
      known(field(doc, "measure", "config").get<std::string>(), "measure");
  for (const auto& role : field(doc, "scope", "config"))
    config.scope.insert(known(role.get<std::string>(), "scope"));
  if (config.scope.empty()) throw ConfigError("scope: must be non-empty");

  const auto& mode = field(doc, "mode", "config");
  std::string mode_type = field(mode, "type", "mode").get<std::string>();
  if (mode_type == "sample") {
    config.sample_mode = true;
    config.trials = field(mode, "trials", "mode").get<long>();
    config.seed = field(mode, "seed", "mode").get<std::uint64_t>();
    if (config.trials <= 0) throw ConfigError("mode.trials must be positive");
  } else if (mode_type != "exhaustive") {
    throw ConfigError("mode.type must be 'exhaustive' or 'sample'");
  }

  if (doc.contains("wrap_policy")) {
    std::string policy = doc["wrap_policy"].get<std::string>();
    if (policy == "error") config.wrap_policy = WrapPolicy::kError;
    else if (policy == "warn") config.wrap_policy = WrapPolicy::kWarn;
    else throw ConfigError("wrap_policy must be 'warn' or 'error'");
  }
  if (doc.contains("expect_conservation"))
    config.expect_conservation = doc["expect_conservation"].get<bool>();

  if (doc.contains("frame_check") && !doc["frame_check"].is_null()) {
    const auto& fc = doc["frame_check"];
    SubsystemLabel frame = known(
        field(fc, "frame", "frame_check").get<std::string>(), "frame_check");
    SubsystemLabel sys = known(
        field(fc, "system", "frame_check").get<std::string>(), "frame_check");
    if (frame == sys)
      throw ConfigError("frame_check: frame equals system");
    if (config.labels.size() != 2)
      throw ConfigError(
          "frame_check: needs a scenario with exactly the two checked "
          "labels");
    config.frame_check = FrameCheckSpec{
        frame, sys,
        parse_profile(field(fc, "target", "frame_check"),
                      config.dims.at(frame), "frame_check.target")};
  }
  if (doc.contains("table1_l0") && !doc["table1_l0"].is_null()) {
    config.table1_l0 = doc["table1_l0"].get<int>();
    check_table1_pattern(config);
  }

  check_support_fit(config);
  return config;
}

ScenarioConfig load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("scenario file " + path + ": " + e.what());
  }
  return parse_scenario(doc);
}

namespace {

nlohmann::json dist_json(const std::map<int, double>& dist) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& [value, p] : dist)
    rows.push_back(nlohmann::json::array({value, p}));
  return rows;
}

nlohmann::json dist_json(const LatticeDistribution& dist) {
  return dist_json(dist.as_map());
}

nlohmann::json table1_json(const ChainReport& r) {
  return {{"preparer_at_prep", dist_json(r.preparer_at_prep)},
          {"preparer_post_measure", dist_json(r.preparer_post_measure)},
          {"grandpreparer_at_prep", dist_json(r.grandpreparer_at_prep)},
          {"grandpreparer_post_measure",
           dist_json(r.grandpreparer_post_measure)}};
}

double table1_max_difference(const ChainReport& a, const ChainReport& b) {
  double d = max_abs_difference(a.preparer_at_prep, b.preparer_at_prep);
  d = std::max(
      d, max_abs_difference(a.preparer_post_measure, b.preparer_post_measure));
  d = std::max(d, max_abs_difference(a.grandpreparer_at_prep,
                                     b.grandpreparer_at_prep));
  d = std::max(d, max_abs_difference(a.grandpreparer_post_measure,
                                     b.grandpreparer_post_measure));
  return d;
}

}  // namespace

Report run_scenario(const ScenarioConfig& config) {
  std::vector<std::pair<SubsystemLabel, ModeWavefunction>> parts;
  for (SubsystemLabel label : config.labels)
    parts.emplace_back(label, config.initial.at(label));
  CompositeState initial = tensor(parts);

  WrapGuard guard{config.wrap_policy};
  Report report;
  report.scenario = config.name;
  report.ledger = build_ledger(initial, config.chain, config.measure,
                               config.scope, &guard);
  report.wrap_events = guard.events;
  report.conservation_expected = config.expect_conservation;
  report.conservation_violated =
      config.expect_conservation && report.ledger.max_deviation() > kAmpTol;

  // Pre-measurement state for the report's entropy/residual/meter sections.
  WrapGuard quiet{WrapPolicy::kWarn};
  CompositeState evolved = initial;
  for (const auto& kind : config.chain)
    evolved = apply_interaction(evolved, kind, &quiet);

  nlohmann::json& doc = report.json;
  doc["schema_version"] = 1;
  doc["scenario"] = config.name;
  doc["description"] = config.description;
  doc["config"] = config.echo;
  doc["mode"] = config.sample_mode ? "sample" : "exhaustive";
  doc["seed"] = config.sample_mode ? nlohmann::json(config.seed)
                                   : nlohmann::json(nullptr);
  doc["trials"] = config.sample_mode ? nlohmann::json(config.trials)
                                     : nlohmann::json(nullptr);
  doc["rng"] = kRngNote;
  doc["baseline"] = dist_json(report.ledger.baseline);
  doc["max_ledger_deviation"] = report.ledger.max_deviation();
  doc["statistical_deviation"] = report.ledger.statistical_deviation();
  doc["conservation_expected"] = report.conservation_expected;
  doc["conservation_violated"] = report.conservation_violated;
  doc["wrap_events"] = report.wrap_events;

  std::map<int, long> counts;
  if (config.sample_mode) {
    auto records = outcome_table(evolved, config.measure);
    for (long t = 0; t < config.trials; ++t) {
      double u = uniform_unit(trial_seed(config.seed, t));
      double cumulative = 0.0;
      const OutcomeRecord* drawn = &records.back();
      for (const auto& record : records) {
        cumulative += record.probability;
        if (u < cumulative) { drawn = &record; break; }
      }
      ++counts[drawn->value];
    }
  }

  nlohmann::json outcomes = nlohmann::json::array();
  for (const auto& o : report.ledger.per_outcome) {
    nlohmann::json row = {{"value", o.value},
                          {"probability", o.probability},
                          {"post_total_L", dist_json(o.post_total_L)},
                          {"max_deviation", o.max_deviation}};
    if (config.sample_mode)
      row["frequency"] =
          static_cast<double>(counts[o.value]) / config.trials;
    outcomes.push_back(std::move(row));
  }
  doc["outcomes"] = std::move(outcomes);

  nlohmann::json entropies = nlohmann::json::object();
  for (SubsystemLabel label : config.labels)
    entropies[to_string(label)] = entanglement_entropy(evolved, label);
  doc["entropies"] = std::move(entropies);

  nlohmann::json residuals = nlohmann::json::object();
  if (config.frame_check) {
    const auto& fc = *config.frame_check;
    residuals["frame_factorization"] =
        frame_factorization_residual(evolved, fc.frame, fc.sys, fc.target);
  }
  doc["residuals"] = std::move(residuals);

  if (config.table1_l0) {
    const ShiftPrepare& first = *as_shift(config.chain[0]);
    const ShiftPrepare& second = *as_shift(config.chain[1]);
    const ModeWavefunction& phi_g =
        config.initial.at(SubsystemLabel::GrandPreparer);
    WrapGuard table_guard{config.wrap_policy};
    ChainReport simulated = chain_report(phi_g, first.profile, second.profile,
                                         *config.table1_l0, &table_guard);
    ChainReport oracle = table1_oracle(phi_g, first.profile, *config.table1_l0);
    doc["table1"] = {{"l0", *config.table1_l0},
                     {"simulated", table1_json(simulated)},
                     {"oracle", table1_json(oracle)},
                     {"max_oracle_deviation",
                      table1_max_difference(simulated, oracle)}};
  } else {
    doc["table1"] = nlohmann::json::object();
  }

  bool has_meter = std::count(config.labels.begin(), config.labels.end(),
                              SubsystemLabel::Meter) > 0;
  if (has_meter && !config.chain.empty()) {
    MeterCheck check =
        meter_untouched_check(initial, evolved, SubsystemLabel::Meter);
    doc["meter"] = {{"untouched", check.ok},
                    {"deviation", check.max_deviation}};
  } else {
    doc["meter"] = nlohmann::json::object();
  }
  return report;
}

void emit_report(const Report& report, ReportFormat format,
                 std::ostream& out) {
  if (format == ReportFormat::kJson) {
    out << report.json.dump(2) << '\n';
    return;
  }
  bool sampled = report.json.contains("mode") &&
                 report.json["mode"] == "sample";
  out << (sampled ? "outcome,probability,deviation,frequency\n"
                  : "outcome,probability,deviation\n");
  char buf[128];
  for (const auto& row : report.json["outcomes"]) {
    if (sampled) {
      std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n",
                    row["value"].get<int>(), row["probability"].get<double>(),
                    row["max_deviation"].get<double>(),
                    row["frequency"].get<double>());
    } else {
      std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n",
                    row["value"].get<int>(), row["probability"].get<double>(),
                    row["max_deviation"].get<double>());
    }
    out << buf;
  }
}

void emit_report_file(const Report& report, ReportFormat format,
                      const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot open for writing: " + path);
  emit_report(report, format, out);
  out.flush();
  if (!out) throw std::ios_base::failure("write failed: " + path);
}

}  // namespace circlesim
