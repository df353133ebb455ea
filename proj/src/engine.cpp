#include "aoisched/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>

#include <boost/math/distributions/students_t.hpp>

#include "aoisched/interference.hpp"
#include "aoisched/rng.hpp"

namespace aoisched {

namespace {

void check_conservation(const LinkState& s, std::size_t link) {
  if (s.arrivals() != s.deliveries() + s.queue_length())
    throw std::logic_error("packet conservation violated on link " + std::to_string(link));
}

}  // namespace

SimConfig SimConfig::defaults() {
  SimConfig c;
  c.channel.path_loss_exponent = 3.8;
  c.channel.sinr_threshold = db_to_linear(0.0);
  c.channel.snr = snr_from_dbm(23.7, -90.0);
  c.channel.link_distance = 25.0;
  c.density = 1e-4;
  c.region = RegionSpec::torus(2000.0);
  return c;
}

void SimConfig::validate() const {
  if (!(arrival_rate > 0.0 && arrival_rate <= 1.0)) throw std::invalid_argument("arrival rate must lie in (0, 1]");
  if (horizon < 1) throw std::invalid_argument("horizon must be at least one slot");
  if (realizations < 1) throw std::invalid_argument("need at least one realization");
  if (!(warmup_fraction >= 0.0 && warmup_fraction < 1.0))
    throw std::invalid_argument("warm-up fraction must lie in [0, 1)");
  if (!(backlog_factor > 0.0)) throw std::invalid_argument("backlog factor must be positive");
  if (!(density > 0.0) || !std::isfinite(density)) throw std::invalid_argument("density must be positive");
  channel.validate();
  region.validate();
  spec.validate();
}

std::int64_t SimConfig::warmup_slots() const {
  return static_cast<std::int64_t>(std::floor(warmup_fraction * static_cast<double>(horizon)));
}

NetworkPeak network_peak_aoi(std::span<const LinkReport> per_link, const RegionSpec& window,
                             PeakAggregation aggregation) {
  if (per_link.empty()) throw std::invalid_argument("network peak AoI of an empty link set");
  NetworkPeak out;
  double sum = 0.0;
  std::size_t counted = 0;
  for (const auto& l : per_link) {
    if (!window.in_window(l.tx)) continue;
    ++out.links;
    if (l.stats.stable) ++out.stable_links;
    if (aggregation == PeakAggregation::AllLinks) {
      sum += l.stats.censored_peak_aoi;
      ++counted;
    } else if (l.stats.stable) {
      sum += l.stats.peak_aoi;
      ++counted;
    }
  }
  if (out.links > 0) out.fraction_stable = static_cast<double>(out.stable_links) / static_cast<double>(out.links);
  out.value = counted > 0 ? sum / static_cast<double>(counted) : kUnboundedAge;
  return out;
}

std::vector<LinkReport> run_realization(const NetworkRealization& realization, const PolicyAssignment& gamma,
                                        const SimConfig& config, std::size_t realization_index) {
  config.validate();
  const std::size_t n = realization.size();
  if (gamma.size() != n) throw std::invalid_argument("policy assignment does not match the realization");
  for (double g : gamma.gamma)
    if (!(g >= 0.0 && g <= 1.0)) throw std::invalid_argument("access probabilities must lie in [0, 1]");

  const ChannelParams& params = config.channel;
  const std::uint64_t seed = config.master_seed;
  const auto r_index = static_cast<std::uint64_t>(realization_index);
  const double noise = params.noise_exponent();
  const bool dominant = config.mode == SystemMode::Dominant;

  std::vector<LinkState> links(n, LinkState(config.warmup_slots()));
  std::vector<std::uint64_t> attempts(n, 0), decoded(n, 0);

  const bool marginal = config.fading == FadingModel::Marginal;
  const InterferenceCosts costs = marginal ? InterferenceCosts(realization, params) : InterferenceCosts();

  std::vector<std::size_t> active;
  std::vector<char> success(n, 0);
  std::vector<double> sums;
  active.reserve(n);

  for (std::int64_t t = 0; t < config.horizon; ++t) {
    const auto slot = static_cast<std::uint64_t>(t);
    active.clear();
    for (std::size_t i = 0; i < n; ++i) {
      auto arrival = Stream::keyed(seed, r_index, i, slot, Purpose::Arrival);
      links[i].step_arrival(t, arrival.bernoulli(config.arrival_rate));
      auto access = Stream::keyed(seed, r_index, i, slot, Purpose::Transmit);
      const bool scheduled = access.bernoulli(gamma.gamma[i]);
      if (scheduled && (dominant || !links[i].empty())) active.push_back(i);
    }

    // Decide every outcome against the frozen active set before any update.
    std::fill(success.begin(), success.end(), 0);
    if (marginal) {
      costs.sums(active, sums);
      for (std::size_t k = 0; k < active.size(); ++k) {
        const std::size_t i = active[k];
        auto draw = Stream::keyed(seed, r_index, i, slot, Purpose::Success);
        success[i] = draw.uniform() < std::exp(-noise - sums[k]);
      }
    } else {
      for (const std::size_t i : active) {
        auto fades = Stream::keyed(seed, r_index, i, slot, Purpose::Fading);
        success[i] = slot_sinr_success(i, active, realization, params, fades);
      }
    }

    for (const std::size_t i : active) {
      ++attempts[i];
      if (success[i]) ++decoded[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      // Dummy packets decode but deliver nothing.
      links[i].step_delivery(t, success[i] && !links[i].empty());
    }
  }

  const StabilityRule rule{config.arrival_rate, config.horizon, config.backlog_factor};
  std::vector<LinkReport> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    check_conservation(links[i], i);
    out[i].realization = realization_index;
    out[i].link = i;
    out[i].tx = realization.transmitters[i];
    out[i].gamma = gamma.gamma[i];
    out[i].stats = peak_aoi_estimate(links[i], rule);
    out[i].attempts = attempts[i];
    out[i].decoded = decoded[i];
  }
  return out;
}

std::uint64_t realization_seed(std::uint64_t master_seed, std::size_t index) {
  return derive_key(master_seed, static_cast<std::uint64_t>(Purpose::Geometry), static_cast<std::uint64_t>(index));
}

double ci95_half_width(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  const boost::math::students_t dist(static_cast<double>(n - 1));
  return boost::math::quantile(boost::math::complement(dist, 0.025)) * sd / std::sqrt(static_cast<double>(n));
}

SimResult run_experiment(const SimConfig& config, unsigned threads) {
  config.validate();
  std::vector<std::vector<LinkReport>> outcomes(config.realizations);
  std::vector<std::exception_ptr> errors(config.realizations);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t k = next.fetch_add(1); k < config.realizations; k = next.fetch_add(1)) {
      try {
        const auto net = sample_bipolar(config.density, config.channel.link_distance, config.region,
                                        realization_seed(config.master_seed, k));
        const auto gamma = assign_policy(net, config.spec, config.channel);
        outcomes[k] = run_realization(net, gamma, config, k);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };

  const unsigned pool = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(config.realizations)));
  if (pool == 1) {
    worker();
  } else {
    std::vector<std::jthread> workers;
    workers.reserve(pool);
    for (unsigned w = 0; w < pool; ++w) workers.emplace_back(worker);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  SimResult result;
  std::size_t links = 0, stable = 0;
  double stable_sum = 0.0;
  for (const auto& per_link : outcomes) {
    result.per_link.insert(result.per_link.end(), per_link.begin(), per_link.end());
    if (per_link.empty()) continue;
    const NetworkPeak all = network_peak_aoi(per_link, config.region, PeakAggregation::AllLinks);
    if (all.links == 0) continue;
    result.per_realization_peak.push_back(all.value);
    links += all.links;
    stable += all.stable_links;
    for (const auto& l : per_link)
      if (config.region.in_window(l.tx) && l.stats.stable) stable_sum += l.stats.peak_aoi;
  }
  const auto& peaks = result.per_realization_peak;
  if (!peaks.empty()) {
    result.network_peak_aoi = std::accumulate(peaks.begin(), peaks.end(), 0.0) / static_cast<double>(peaks.size());
    const double half = ci95_half_width(peaks);
    result.ci_low = result.network_peak_aoi - half;
    result.ci_high = result.network_peak_aoi + half;
  }
  if (links > 0) result.fraction_stable = static_cast<double>(stable) / static_cast<double>(links);
  if (stable > 0) result.stable_network_peak_aoi = stable_sum / static_cast<double>(stable);
  return result;
}

}  // namespace aoisched
