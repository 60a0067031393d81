#include <algorithm>
#include <vector>

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

AmbLearner::AmbLearner(Dims dims, Variant variant, double iota, double c)
    : dims_(dims),
      variant_(variant),
      iota_(iota),
      c_(c),
      q_up_(dims, static_cast<double>(dims.H)),
      q_lo_(dims, 0.0),
      v_up_(dims.H + 1, dims.S, 0.0),
      v_lo_(dims.H + 1, dims.S, 0.0),
      n_(static_cast<std::size_t>(dims.H) * static_cast<std::size_t>(dims.S) * static_cast<std::size_t>(dims.A), 0),
      sets_(dims) {}

int AmbLearner::visits(int h, int s, int a) const { return n_[flat_index(dims_, h, s, a)]; }

Policy AmbLearner::current_policy() const {
  Policy pi(dims_.H, dims_.S);
  for (int h = 0; h < dims_.H; ++h) {
    for (int s = 0; s < dims_.S; ++s) pi(h, s) = sets_.widest(h, s, q_up_, q_lo_);
  }
  return pi;
}

EpisodeResult AmbLearner::run_episode(const TabularMdp& mdp, int s1, RandomSource& transitions) {
  ++episodes_;
  const int H = dims_.H;
  const double cap = H;
  EpisodeResult out{{s1, {}}, current_policy()};

  // A^{k+1} filters A^k with the episode-start tables Q-up^k and V-lo^k, so it
  // is computed before any update below.
  ActionSets next_sets = sets_;
  for (int h = 0; h < H; ++h) {
    for (int s = 0; s < dims_.S; ++s) next_sets.eliminate_below(h, s, q_up_, v_lo_(h, s));
  }

  // Step 1: roll out the whole episode.
  auto& steps = out.trajectory.steps;
  steps.reserve(static_cast<std::size_t>(H));
  int s = s1;
  for (int h = 0; h < H; ++h) {
    const int a = out.policy(h, s);
    steps.push_back({s, a, mdp.reward(h, s, a)});
    if (h + 1 < H) s = sample_next_state(mdp, h, s, a, transitions);
  }

  // Episode-start values along the path; index H is the terminal zero.
  std::vector<double> vu_start(static_cast<std::size_t>(H) + 1, 0.0);
  std::vector<double> vl_start(static_cast<std::size_t>(H) + 1, 0.0);
  std::vector<char> decided(static_cast<std::size_t>(H) + 1, 0);
  for (int h = 0; h < H; ++h) {
    const int sh = steps[static_cast<std::size_t>(h)].state;
    vu_start[static_cast<std::size_t>(h)] = v_up_(h, sh);
    vl_start[static_cast<std::size_t>(h)] = v_lo_(h, sh);
    decided[static_cast<std::size_t>(h)] = sets_.size(h, sh) == 1;
    ++n_[flat_index(dims_, h, sh, steps[static_cast<std::size_t>(h)].action)];
  }

  // Step 2: backward multi-step bootstrapping updates at undecided states.
  for (int h = H - 1; h >= 0; --h) {
    if (decided[static_cast<std::size_t>(h)]) continue;
    const auto& step = steps[static_cast<std::size_t>(h)];
    int h_next = h + 1;
    while (h_next < H && decided[static_cast<std::size_t>(h_next)]) ++h_next;
    double partial = 0.0;
    for (int i = h; i < h_next; ++i) partial += steps[static_cast<std::size_t>(i)].reward;

    const int n = n_[flat_index(dims_, h, step.state, step.action)];
    const double b = bonus(n, H, iota_, c_);
    const double lr = eta(n, H);
    const double vu = vu_start[static_cast<std::size_t>(h_next)];
    const double vl = vl_start[static_cast<std::size_t>(h_next)];
    double up = (1.0 - lr) * q_up_(h, step.state, step.action) + lr * (partial + vu + b);
    double lo = (1.0 - lr) * q_lo_(h, step.state, step.action) + lr * (partial + vl - b);

    if (variant_ == Variant::Original) {
      q_up_(h, step.state, step.action) = std::min(cap, up);
      q_lo_(h, step.state, step.action) = std::max(0.0, lo);
      v_up_(h, step.state) = sets_.max_over(h, step.state, q_up_);
      v_lo_(h, step.state) = sets_.max_over(h, step.state, q_lo_);
    } else {
      q_up_(h, step.state, step.action) = up;
      q_lo_(h, step.state, step.action) = lo;
      v_up_(h, step.state) = std::min(cap, sets_.max_over(h, step.state, q_up_));
      v_lo_(h, step.state) = std::max(0.0, sets_.max_over(h, step.state, q_lo_));
    }

    const int next_state = h_next < H ? steps[static_cast<std::size_t>(h_next)].state : -1;
    emit({episodes_, h, step.state, step.action, n, b, partial, h_next, next_state, vu, vl,
          q_up_(h, step.state, step.action), q_lo_(h, step.state, step.action)});
  }

  // Step 3: elimination (computed above); decided sets follow from the sizes.
  sets_ = std::move(next_sets);
  return out;
}

std::uint64_t AmbLearner::digest() const {
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
