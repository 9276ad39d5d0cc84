#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "persuasion/game.hpp"

namespace persuasion {

// Statistical experiment as a probability kernel: states x signals, rows
// sum to exactly one.
struct Kernel {
  std::vector<std::string> signals;
  std::vector<std::vector<Rational>> probs;  // states x signals

  int num_states() const { return static_cast<int>(probs.size()); }
  int num_signals() const { return static_cast<int>(signals.size()); }
  void validate() const;  // throws std::invalid_argument
};

struct LabeledInterval {
  Rational lo, hi;     // [lo, hi); the last interval of a row is [lo, 1]
  std::string signal;
};

// The same experiment as a per-state labeled interval partition of [0,1].
// `coordinate` selects which of the two independent uniform draws the
// experiment reads; experiments reading different coordinates are
// independent, experiments reading the same coordinate are coupled.
struct IntervalPartition {
  std::vector<std::string> signals;                 // signal universe, fixed order
  std::vector<std::vector<LabeledInterval>> rows;   // per state
  int coordinate = 0;                               // 0 or 1

  int num_states() const { return static_cast<int>(rows.size()); }
  void validate() const;
  // Interval containing x within the given state's row (last interval is
  // closed at 1).
  const std::string& locate(int state, const Rational& x) const;
};

// Consecutive intervals in the kernel's signal order; zero-length signals
// omitted per state.
IntervalPartition kernel_to_partition(const Kernel& k);

// Lengths per signal, i.e. the kernel the partition encodes.
Kernel partition_to_kernel(const IntervalPartition& p);

struct SignalStat {
  std::string signal;
  Rational lambda;                  // marginal probability of the signal
  std::optional<Belief> posterior;  // absent for zero-probability signals
  bool zero = false;
};

std::vector<SignalStat> signal_stats(const Kernel& k, const Belief& prior);

// Joint law of the two experiments' signals, conditional on each state and
// unconditionally under the prior. Same-coordinate experiments overlap on
// the unit interval; different-coordinate experiments are independent.
struct JointSignalDist {
  std::vector<std::string> signals1, signals2;
  std::vector<std::vector<std::vector<Rational>>> conditional;  // state -> |S1| x |S2|
  std::vector<std::vector<Rational>> unconditional;             // |S1| x |S2|
};

JointSignalDist joint_distribution(const IntervalPartition& p1, const IntervalPartition& p2,
                                   const Belief& prior);

struct PlayOutcome {
  int state = 0;
  std::string signal1, signal2;
};

// One play of nature: state from the prior, a uniform draw per coordinate,
// both experiments read off their intervals. Deterministic in the seed;
// the analytic path stays exact (the sampled doubles are compared against
// interval endpoints as exact dyadic rationals).
PlayOutcome sample_play(const IntervalPartition& p1, const IntervalPartition& p2,
                        const Belief& prior, std::uint64_t seed);

// Same draw on a caller-owned generator (the stream is: state, x, y); the
// simulator keeps drawing from the same generator for report sampling.
PlayOutcome sample_play(const IntervalPartition& p1, const IntervalPartition& p2,
                        const Belief& prior, std::mt19937_64& gen);

namespace rng {
// PRNG identification string recorded in simulation reports.
inline constexpr const char* kAlgorithm = "mt19937_64+splitmix64/u53";
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial);
}  // namespace rng

}  // namespace persuasion
