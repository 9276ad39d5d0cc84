#include "persuasion/experiment.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>

namespace persuasion {

void Kernel::validate() const {
  if (signals.empty()) throw std::invalid_argument("Kernel: no signals");
  std::set<std::string> uniq(signals.begin(), signals.end());
  if (uniq.size() != signals.size()) throw std::invalid_argument("Kernel: duplicate signal labels");
  for (const auto& row : probs) {
    if (row.size() != signals.size()) throw std::invalid_argument("Kernel: row length mismatch");
    Rational sum;
    for (const auto& p : row) {
      if (p.sign() < 0) throw std::invalid_argument("Kernel: negative probability");
      sum += p;
    }
    if (sum != Rational(1)) throw std::invalid_argument("Kernel: row sums to " + sum.str());
  }
}

void IntervalPartition::validate() const {
  if (coordinate != 0 && coordinate != 1) throw std::invalid_argument("IntervalPartition: coordinate");
  std::set<std::string> universe(signals.begin(), signals.end());
  for (const auto& row : rows) {
    if (row.empty()) throw std::invalid_argument("IntervalPartition: empty state row");
    Rational prev(0);
    for (const auto& iv : row) {
      if (iv.lo != prev) throw std::invalid_argument("IntervalPartition: gap or overlap at " + iv.lo.str());
      if (iv.hi <= iv.lo) throw std::invalid_argument("IntervalPartition: empty interval");
      if (!universe.count(iv.signal)) throw std::invalid_argument("IntervalPartition: unknown signal " + iv.signal);
      prev = iv.hi;
    }
    if (prev != Rational(1)) throw std::invalid_argument("IntervalPartition: row does not cover [0,1]");
  }
}

const std::string& IntervalPartition::locate(int state, const Rational& x) const {
  const auto& row = rows.at(state);
  for (std::size_t i = 0; i + 1 < row.size(); ++i) {
    if (x < row[i].hi) return row[i].signal;
  }
  return row.back().signal;  // [lo, 1]
}

IntervalPartition kernel_to_partition(const Kernel& k) {
  k.validate();
  IntervalPartition p;
  p.signals = k.signals;
  p.rows.resize(k.num_states());
  for (int s = 0; s < k.num_states(); ++s) {
    Rational at(0);
    for (int j = 0; j < k.num_signals(); ++j) {
      const Rational& len = k.probs[s][j];
      if (len.is_zero()) continue;
      p.rows[s].push_back({at, at + len, k.signals[j]});
      at += len;
    }
  }
  p.validate();
  return p;
}

Kernel partition_to_kernel(const IntervalPartition& p) {
  Kernel k;
  k.signals = p.signals;
  k.probs.assign(p.num_states(), std::vector<Rational>(p.signals.size(), Rational(0)));
  for (int s = 0; s < p.num_states(); ++s) {
    for (const auto& iv : p.rows[s]) {
      auto it = std::find(p.signals.begin(), p.signals.end(), iv.signal);
      k.probs[s][it - p.signals.begin()] += iv.hi - iv.lo;
    }
  }
  k.validate();
  return k;
}

std::vector<SignalStat> signal_stats(const Kernel& k, const Belief& prior) {
  k.validate();
  if (prior.size() != k.num_states()) throw std::invalid_argument("signal_stats: dimension mismatch");
  std::vector<SignalStat> out;
  for (int j = 0; j < k.num_signals(); ++j) {
    SignalStat st;
    st.signal = k.signals[j];
    for (int s = 0; s < k.num_states(); ++s) st.lambda += prior[s] * k.probs[s][j];
    if (st.lambda.is_zero()) {
      st.zero = true;
    } else {
      std::vector<Rational> w(k.num_states());
      for (int s = 0; s < k.num_states(); ++s) w[s] = prior[s] * k.probs[s][j] / st.lambda;
      st.posterior = Belief(std::move(w));
    }
    out.push_back(std::move(st));
  }
  return out;
}

JointSignalDist joint_distribution(const IntervalPartition& p1, const IntervalPartition& p2,
                                   const Belief& prior) {
  p1.validate();
  p2.validate();
  if (p1.num_states() != p2.num_states() || p1.num_states() != prior.size()) {
    throw std::invalid_argument("joint_distribution: state sets differ");
  }
  const int n = prior.size();
  const int m1 = static_cast<int>(p1.signals.size());
  const int m2 = static_cast<int>(p2.signals.size());
  auto index_of = [](const std::vector<std::string>& labels, const std::string& s) {
    return static_cast<int>(std::find(labels.begin(), labels.end(), s) - labels.begin());
  };

  JointSignalDist out;
  out.signals1 = p1.signals;
  out.signals2 = p2.signals;
  out.conditional.assign(n, std::vector<std::vector<Rational>>(m1, std::vector<Rational>(m2)));
  out.unconditional.assign(m1, std::vector<Rational>(m2));

  const bool independent = p1.coordinate != p2.coordinate;
  for (int s = 0; s < n; ++s) {
    auto& cell = out.conditional[s];
    if (independent) {
      std::vector<Rational> len1(m1), len2(m2);
      for (const auto& iv : p1.rows[s]) len1[index_of(p1.signals, iv.signal)] += iv.hi - iv.lo;
      for (const auto& iv : p2.rows[s]) len2[index_of(p2.signals, iv.signal)] += iv.hi - iv.lo;
      for (int i = 0; i < m1; ++i) {
        for (int j = 0; j < m2; ++j) cell[i][j] = len1[i] * len2[j];
      }
    } else {
      // sweep the merged breakpoints; each elementary piece lies in exactly
      // one interval of each partition
      std::vector<Rational> cuts{Rational(0), Rational(1)};
      for (const auto& iv : p1.rows[s]) cuts.push_back(iv.hi);
      for (const auto& iv : p2.rows[s]) cuts.push_back(iv.hi);
      std::sort(cuts.begin(), cuts.end());
      cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
      for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        if (cuts[c] >= Rational(1)) break;
        const std::string& s1 = p1.locate(s, cuts[c]);
        const std::string& s2 = p2.locate(s, cuts[c]);
        cell[index_of(p1.signals, s1)][index_of(p2.signals, s2)] += cuts[c + 1] - cuts[c];
      }
    }
    for (int i = 0; i < m1; ++i) {
      for (int j = 0; j < m2; ++j) out.unconditional[i][j] += prior[s] * cell[i][j];
    }
  }
  return out;
}

namespace rng {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
  return splitmix64(splitmix64(seed) ^ (trial + 0x9e3779b97f4a7c15ULL));
}

}  // namespace rng

namespace {

// 53-bit uniform in [0,1); implementation pinned (std distributions are not
// bit-portable across standard libraries).
double unit_double(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace

PlayOutcome sample_play(const IntervalPartition& p1, const IntervalPartition& p2,
                        const Belief& prior, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  return sample_play(p1, p2, prior, gen);
}

PlayOutcome sample_play(const IntervalPartition& p1, const IntervalPartition& p2,
                        const Belief& prior, std::mt19937_64& gen) {
  Rational uw = Rational::from_double(unit_double(gen));
  int state = prior.size() - 1;
  Rational cum;
  for (int s = 0; s < prior.size(); ++s) {
    cum += prior[s];
    if (uw < cum) {
      state = s;
      break;
    }
  }
  Rational x = Rational::from_double(unit_double(gen));
  Rational y = Rational::from_double(unit_double(gen));
  PlayOutcome o;
  o.state = state;
  o.signal1 = p1.locate(state, p1.coordinate == 0 ? x : y);
  o.signal2 = p2.locate(state, p2.coordinate == 0 ? x : y);
  return o;
}

}  // namespace persuasion
