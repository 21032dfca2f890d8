#pragma once

// Scenario selection by string:
//   uniform | variable:<dv>:<cc> | case-study:<profile>[:<dv>] | file:<path>
// Each resolves to a pure function episode_seed -> DownlinkPeriod.

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "leosched/core.hpp"
#include "leosched/scenarios/case_study.hpp"
#include "leosched/scenarios/contact_plan.hpp"
#include "leosched/scenarios/synthetic.hpp"
#include "leosched/schemes_static.hpp"

namespace leosched {

inline Rng scenario_rng(std::uint64_t episode_seed) {
  return Rng(derive_seed(episode_seed, kScenarioDomain));
}

inline ScenarioFn uniform_scenario(UniformScenarioConfig cfg = {}) {
  return [cfg](std::uint64_t seed) {
    Rng rng = scenario_rng(seed);
    return gen_uniform_scenario(cfg, rng);
  };
}

inline ScenarioFn variable_scenario(VariableScenarioConfig cfg) {
  return [cfg](std::uint64_t seed) {
    Rng rng = scenario_rng(seed);
    return gen_variable_scenario(cfg, rng);
  };
}

/// Contacts are built once and shared by every episode.
inline ScenarioFn case_study_scenario(const CaseStudyProfile& profile,
                                      std::optional<double> dv_fraction = std::nullopt) {
  auto data = std::make_shared<const CaseStudyData>(build_case_study_data(profile));
  return [data, dv_fraction](std::uint64_t seed) {
    Rng rng = scenario_rng(seed);
    return build_case_study_episode(*data, rng, dv_fraction);
  };
}

/// Fixed contacts from a plan file; dv_init uniform in [0.05, 1] x V per episode.
inline ScenarioFn contact_plan_scenario(std::vector<Contact> contacts) {
  auto shared = std::make_shared<const std::vector<Contact>>(std::move(contacts));
  return [shared](std::uint64_t seed) {
    Rng rng = scenario_rng(seed);
    std::int64_t v = 0;
    for (const auto& c : *shared) v += c.volume;
    const auto lo = static_cast<std::int64_t>(std::ceil(0.05 * static_cast<double>(v) - 1e-9));
    const std::int64_t dv = v > 0 ? uniform_int(rng, lo, v) : 0;
    return make_period(*shared, dv);
  };
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline double parse_fraction(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double x = std::stod(s, &used);
    if (used == s.size()) return x;
  } catch (const std::exception&) {
  }
  throw std::invalid_argument("scenario: bad " + what + " '" + s + "'");
}

/// Case-study profiles may be overridden (e.g. a shorter window in tests).
inline ScenarioFn parse_scenario(const std::string& spec,
                                 const std::optional<CaseStudyProfile>& profile_override = {}) {
  if (spec == "uniform") return uniform_scenario();
  if (spec.rfind("file:", 0) == 0) return contact_plan_scenario(load_contact_plan(spec.substr(5)));
  const auto parts = split(spec, ':');
  if (parts[0] == "variable") {
    if (parts.size() != 3) throw std::invalid_argument("scenario: expected variable:<dv>:<cc>");
    VariableScenarioConfig cfg;
    cfg.dv_fraction = parse_fraction(parts[1], "dv fraction");
    cfg.cc_mean = parse_fraction(parts[2], "cloud-cover mean");
    if (!(cfg.dv_fraction >= 0.0 && cfg.dv_fraction <= 1.0) ||
        !(cfg.cc_mean >= 0.0 && cfg.cc_mean <= 1.0))
      throw std::invalid_argument("scenario: variable fractions must lie in [0,1]");
    return variable_scenario(cfg);
  }
  if (parts[0] == "case-study") {
    if (parts.size() < 2 || parts.size() > 3)
      throw std::invalid_argument("scenario: expected case-study:<profile>[:<dv>]");
    CaseStudyProfile profile = profile_override ? *profile_override : case_study_profile(parts[1]);
    std::optional<double> dv;
    if (parts.size() == 3) dv = parse_fraction(parts[2], "dv fraction");
    return case_study_scenario(profile, dv);
  }
  throw std::invalid_argument("unknown scenario '" + spec +
                              "' (uniform | variable:<dv>:<cc> | case-study:<profile>[:<dv>] | "
                              "file:<path>)");
}

}  // namespace leosched
