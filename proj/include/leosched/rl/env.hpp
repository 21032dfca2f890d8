#pragma once

// Downlink scheduling as an episodic MDP: one step per contact, action 1
// uses the contact, action 0 skips it.

#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "leosched/channel.hpp"
#include "leosched/core.hpp"
#include "leosched/metrics.hpp"

namespace leosched::rl {

struct RewardParams {
  double c = 100.0;  // reward scaling factor
};

/// What the agent sees before deciding on the next contact. Every field is
/// normalised to [0, 1].
struct Observation {
  double cc_next = 1.0;  // forecast cloud cover of the next contact
  double dv = 0.0;       // remaining buffer / dv_init
  double cvr = 0.0;      // remaining contact capacity / V
  struct Row {
    double cc;      // forecast, 1.0 once the contact is in the past
    double volume;  // v_i / V
  };
  std::vector<Row> sgc;
  std::size_t next = 0;  // position of the next contact (not fed to networks)

  std::size_t input_dim() const { return 3 + 2 * sgc.size(); }

  /// [cc, dv, cvr, cc_1, v_1, ..., cc_N, v_N]
  template <class Out>
  void flatten_into(Out& out) const {
    out[0] = cc_next;
    out[1] = dv;
    out[2] = cvr;
    for (std::size_t i = 0; i < sgc.size(); ++i) {
      out[3 + 2 * i] = sgc[i].cc;
      out[4 + 2 * i] = sgc[i].volume;
    }
  }

  std::vector<double> flatten() const {
    std::vector<double> v(input_dim());
    flatten_into(v);
    return v;
  }
};

/// Per-step reward. Using a contact that delivers anything earns the
/// delivered share minus an inefficiency discount; using one that delivers
/// nothing is penalised; skipping earns nothing.
inline double step_reward(double delivered, double excess, double volume, int action,
                          double dv_init, double c) {
  if (action == 0 || dv_init <= 0.0) return 0.0;
  const double scale = c / dv_init;
  const double f1 = scale * delivered;
  if (f1 > 0.0) {
    const double denom = excess + volume;
    const double f2 = denom > 0.0 ? f1 * excess / denom : 0.0;
    return f1 - f2;
  }
  return -excess * c / (2.0 * dv_init);
}

/// Episode-end reward from delivery ratio and the fraction of total contact
/// volume that was used.
inline double terminal_reward(double dr, double contact_fraction_used, double c) {
  if (dr >= 1.0) {
    if (!(contact_fraction_used > 0.0))
      throw std::logic_error("terminal_reward: full delivery with no contact used");
    return 2.0 * c * dr / contact_fraction_used;
  }
  return c * dr;
}

struct StepOutcome {
  Observation observation;
  double reward = 0.0;           // step reward, plus terminal reward on the last step
  double step_component = 0.0;
  double terminal_component = 0.0;
  bool done = false;
};

class DownlinkEnv {
 public:
  DownlinkEnv(DownlinkPeriod period, RewardParams params, std::uint64_t episode_seed)
      : period_(std::move(period)),
        params_(params),
        channel_(episode_seed),
        recorder_(period_, episode_seed),
        seed_(episode_seed) {
    validate(period_);
    if (!(params_.c > 0.0)) throw std::invalid_argument("reward scale c must be > 0");
    v_total_ = total_volume(period_);
    reset();
  }

  Observation reset() {
    recorder_ = EpisodeRecorder(period_, seed_);
    k_ = 0;
    step_sum_ = 0.0;
    terminal_ = 0.0;
    used_volume_ = 0;
    done_ = false;
    expired_.assign(period_.size(), false);
    if (period_.dv_init == 0 || period_.size() == 0) finish();
    return observe();
  }

  StepOutcome step(int action) {
    if (done_) throw std::logic_error("step() on a finished episode");
    if (action != 0 && action != 1) throw std::invalid_argument("action must be 0 or 1");
    const auto& c = period_.contacts[k_];
    double sr = 0.0;
    if (action == 1) {
      const auto out = attempt_contact(c, recorder_.dv_remaining(), period_, channel_);
      recorder_.record(k_, out);
      used_volume_ += c.volume;
      sr = step_reward(out.delivered, out.excess_energy, static_cast<double>(c.volume), 1,
                       static_cast<double>(period_.dv_init), params_.c);
    }
    step_sum_ += sr;
    expired_[k_] = true;
    ++k_;
    StepOutcome res;
    res.step_component = sr;
    if (k_ >= period_.size() || recorder_.dv_remaining() <= 0.0) {
      finish();
      res.terminal_component = terminal_;
    }
    res.reward = sr + res.terminal_component;
    res.done = done_;
    res.observation = observe();
    return res;
  }

  Observation observe() const {
    Observation o;
    o.next = k_;
    o.cc_next = k_ < period_.size() ? period_.contacts[k_].forecast_cloud_cover : 1.0;
    const double dv_init = static_cast<double>(period_.dv_init);
    o.dv = dv_init > 0.0 ? recorder_.dv_remaining() / dv_init : 0.0;
    const double v = static_cast<double>(v_total_);
    o.cvr = v > 0.0 ? static_cast<double>(remaining_capacity(period_, k_)) / v : 0.0;
    o.sgc.resize(period_.size());
    for (std::size_t i = 0; i < period_.size(); ++i) {
      const auto& c = period_.contacts[i];
      o.sgc[i] = {expired_.empty() || expired_[i] ? 1.0 : c.forecast_cloud_cover,
                  v > 0.0 ? static_cast<double>(c.volume) / v : 0.0};
    }
    return o;
  }

  bool done() const { return done_; }
  double step_reward_sum() const { return step_sum_; }
  double terminal_reward_value() const { return terminal_; }
  double episode_return() const { return step_sum_ + terminal_; }
  const DownlinkPeriod& period() const { return period_; }

  EpisodeResult result() const {
    EpisodeRecorder copy = recorder_;
    auto r = std::move(copy).finish();
    r.rl_return = episode_return();
    return r;
  }

 private:
  void finish() {
    done_ = true;
    if (period_.dv_init == 0) {
      terminal_ = params_.c;
      return;
    }
    auto snapshot = EpisodeRecorder(recorder_).finish();
    const double ct = v_total_ > 0 ? static_cast<double>(used_volume_) / static_cast<double>(v_total_)
                                    : 0.0;
    terminal_ = terminal_reward(snapshot.delivery_ratio, ct, params_.c);
  }

  DownlinkPeriod period_;
  RewardParams params_;
  ChannelStream channel_;
  EpisodeRecorder recorder_;
  std::uint64_t seed_;
  std::int64_t v_total_ = 0;
  std::size_t k_ = 0;
  double step_sum_ = 0.0;
  double terminal_ = 0.0;
  std::int64_t used_volume_ = 0;
  bool done_ = false;
  std::vector<bool> expired_;
};

}  // namespace leosched::rl
