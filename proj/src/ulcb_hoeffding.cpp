#include <algorithm>

#include "regretlab/hash.hpp"
#include "regretlab/learners.hpp"

namespace regretlab {

namespace {
std::size_t flat_index(const Dims& d, int h, int s, int a) {
  return (static_cast<std::size_t>(h) * static_cast<std::size_t>(d.S) + static_cast<std::size_t>(s)) *
             static_cast<std::size_t>(d.A) +
         static_cast<std::size_t>(a);
}
}  // namespace

UlcbHoeffding::UlcbHoeffding(Dims dims, double iota, double c)
    : dims_(dims),
      iota_(iota),
      c_(c),
      q_up_(dims, static_cast<double>(dims.H)),
      q_lo_(dims, 0.0),
      v_up_(dims.H + 1, dims.S, static_cast<double>(dims.H)),
      v_lo_(dims.H + 1, dims.S, 0.0),
      n_(static_cast<std::size_t>(dims.H) * static_cast<std::size_t>(dims.S) * static_cast<std::size_t>(dims.A), 0),
      sets_(dims) {
  for (int s = 0; s < dims.S; ++s) v_up_(dims.H, s) = 0.0;
}

int UlcbHoeffding::visits(int h, int s, int a) const { return n_[flat_index(dims_, h, s, a)]; }

Policy UlcbHoeffding::current_policy() const {
  Policy pi(dims_.H, dims_.S);
  for (int h = 0; h < dims_.H; ++h) {
    for (int s = 0; s < dims_.S; ++s) pi(h, s) = sets_.widest(h, s, q_up_, q_lo_);
  }
  return pi;
}

EpisodeResult UlcbHoeffding::run_episode(const TabularMdp& mdp, int s1, RandomSource& transitions) {
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

    const int t = ++n_[flat_index(dims_, h, s, a)];
    const double b = bonus(t, dims_.H, iota_, c_);
    const double lr = eta(t, dims_.H);
    const double vu_next = next >= 0 ? v_up_(h + 1, next) : 0.0;
    const double vl_next = next >= 0 ? v_lo_(h + 1, next) : 0.0;
    q_up_(h, s, a) = (1.0 - lr) * q_up_(h, s, a) + lr * (r + vu_next + b);
    q_lo_(h, s, a) = (1.0 - lr) * q_lo_(h, s, a) + lr * (r + vl_next - b);
    // Candidate sets are still those of episode k here.
    v_up_(h, s) = std::min(H, sets_.max_over(h, s, q_up_));
    v_lo_(h, s) = std::max(0.0, sets_.max_over(h, s, q_lo_));

    emit({episodes_, h, s, a, t, b, r, h + 1, next, vu_next, vl_next, q_up_(h, s, a), q_lo_(h, s, a)});
    s = next;
  }

  // Elimination against the post-episode tables.
  for (int h = 0; h < dims_.H; ++h) {
    for (int st = 0; st < dims_.S; ++st) sets_.eliminate_below(h, st, q_up_, v_lo_(h, st));
  }
  return out;
}

std::uint64_t UlcbHoeffding::digest() const {
  Fnv1a f;
  f.update_values(q_up_.values());
  f.update_values(q_lo_.values());
  f.update_values(v_up_.values());
  f.update_values(v_lo_.values());
  f.update_values(n_);
  f.update_values(sets_.flags());
  return f.value();
}

}  // namespace regretlab
