#include <algorithm>

#include "regretlab/hash.hpp"
#include "regretlab/learners.hpp"

namespace regretlab {

UcbHoeffding::UcbHoeffding(Dims dims, double iota, double c)
    : dims_(dims),
      iota_(iota),
      c_(c),
      q_(dims, static_cast<double>(dims.H)),
      v_(dims.H + 1, dims.S, static_cast<double>(dims.H)),
      n_(dims_.H * static_cast<std::size_t>(dims.S) * static_cast<std::size_t>(dims.A), 0) {
  // min{H, max_a Q} with Q = H everywhere; the terminal level is zero.
  for (int s = 0; s < dims.S; ++s) v_(dims.H, s) = 0.0;
}

std::size_t UcbHoeffding::flat(int h, int s, int a) const {
  return (static_cast<std::size_t>(h) * static_cast<std::size_t>(dims_.S) + static_cast<std::size_t>(s)) *
             static_cast<std::size_t>(dims_.A) +
         static_cast<std::size_t>(a);
}

int UcbHoeffding::greedy(int h, int s) const {
  const auto row = q_.row(h, s);
  return static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
}

Policy UcbHoeffding::current_policy() const {
  Policy pi(dims_.H, dims_.S);
  for (int h = 0; h < dims_.H; ++h) {
    for (int s = 0; s < dims_.S; ++s) pi(h, s) = greedy(h, s);
  }
  return pi;
}

EpisodeResult UcbHoeffding::run_episode(const TabularMdp& mdp, int s1, RandomSource& transitions) {
  ++episodes_;
  EpisodeResult out{{s1, {}}, current_policy()};
  out.trajectory.steps.reserve(static_cast<std::size_t>(dims_.H));
  const double H = dims_.H;
  int s = s1;
  for (int h = 0; h < dims_.H; ++h) {
    const int a = out.policy(h, s);
    const double r = mdp.reward(h, s, a);
    out.trajectory.steps.push_back({s, a, r});
    const int next = h + 1 < dims_.H ? sample_next_state(mdp, h, s, a, transitions) : -1;

    const int t = ++n_[flat(h, s, a)];
    const double b = bonus(t, dims_.H, iota_, c_);
    const double lr = eta(t, dims_.H);
    // Level h+1 is written later in this episode, so this is still V^k.
    const double v_next = next >= 0 ? v_(h + 1, next) : 0.0;
    q_(h, s, a) = (1.0 - lr) * q_(h, s, a) + lr * (r + v_next + b);
    const auto row = q_.row(h, s);
    v_(h, s) = std::min(H, *std::max_element(row.begin(), row.end()));

    emit({episodes_, h, s, a, t, b, r, h + 1, next, v_next, 0.0, q_(h, s, a), 0.0});
    s = next;
  }
  return out;
}

std::uint64_t UcbHoeffding::digest() const {
  Fnv1a f;
  f.update_values(q_.values());
  f.update_values(v_.values());
  f.update_values(n_);
  return f.value();
}

}  // namespace regretlab
