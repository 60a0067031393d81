#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "regretlab/learners.hpp"

namespace regretlab {

nlohmann::json audit_record_to_json(const AuditRecord& rec) {
  return {
      {"episode", rec.episode},
      {"h", rec.h},
      {"s", rec.s},
      {"a", rec.a},
      {"n", rec.n},
      {"bonus", rec.bonus},
      {"partial_return", rec.partial_return},
      {"next_step", rec.next_step},
      {"next_state", rec.next_state},
      {"v_up_next", rec.v_up_next},
      {"v_lo_next", rec.v_lo_next},
      {"q_up", rec.q_up},
      {"q_lo", rec.q_lo},
  };
}

AuditRecord audit_record_from_json(const nlohmann::json& doc) {
  AuditRecord rec;
  rec.episode = doc.at("episode").get<std::int64_t>();
  rec.h = doc.at("h").get<int>();
  rec.s = doc.at("s").get<int>();
  rec.a = doc.at("a").get<int>();
  rec.n = doc.at("n").get<int>();
  rec.bonus = doc.at("bonus").get<double>();
  rec.partial_return = doc.at("partial_return").get<double>();
  rec.next_step = doc.at("next_step").get<int>();
  rec.next_state = doc.at("next_state").get<int>();
  rec.v_up_next = doc.at("v_up_next").get<double>();
  rec.v_lo_next = doc.at("v_lo_next").get<double>();
  rec.q_up = doc.at("q_up").get<double>();
  rec.q_lo = doc.at("q_lo").get<double>();
  return rec;
}

UpdateHistory::UpdateHistory(Dims dims)
    : dims_(dims),
      entries_(static_cast<std::size_t>(dims.H) * static_cast<std::size_t>(dims.S) * static_cast<std::size_t>(dims.A)) {}

void UpdateHistory::record(const AuditRecord& rec) {
  if (rec.h < 0 || rec.h >= dims_.H || rec.s < 0 || rec.s >= dims_.S || rec.a < 0 || rec.a >= dims_.A) {
    throw std::out_of_range("audit record index outside history shape");
  }
  entries_[(static_cast<std::size_t>(rec.h) * static_cast<std::size_t>(dims_.S) + static_cast<std::size_t>(rec.s)) *
               static_cast<std::size_t>(dims_.A) +
           static_cast<std::size_t>(rec.a)]
      .push_back(rec);
}

AuditSink UpdateHistory::sink() {
  return [this](const AuditRecord& rec) { record(rec); };
}

const std::vector<AuditRecord>& UpdateHistory::at(int h, int s, int a) const {
  return entries_[(static_cast<std::size_t>(h) * static_cast<std::size_t>(dims_.S) + static_cast<std::size_t>(s)) *
                      static_cast<std::size_t>(dims_.A) +
                  static_cast<std::size_t>(a)];
}

double audit_unrolled_q(const AmbLearner& learner, int h, int s, int a, const UpdateHistory& history, Bound bound) {
  if (history.dims() != learner.dims()) {
    throw std::invalid_argument("audit_unrolled_q: history shape does not match the learner");
  }
  const auto& visits = history.at(h, s, a);
  if (visits.empty()) {
    throw std::invalid_argument("audit_unrolled_q: no update history for (h=" + std::to_string(h) +
                                ", s=" + std::to_string(s) + ", a=" + std::to_string(a) + ")");
  }
  const int N = static_cast<int>(visits.size());
  const auto w = eta_weights(N, learner.dims().H);
  // eta_0^N = 0 for N >= 1, so the initial value drops out.
  double rebuilt = 0.0;
  for (int i = 0; i < N; ++i) {
    const auto& v = visits[static_cast<std::size_t>(i)];
    const double target = bound == Bound::Upper ? v.partial_return + v.v_up_next + v.bonus
                                                : v.partial_return + v.v_lo_next - v.bonus;
    rebuilt += w[static_cast<std::size_t>(i)] * target;
  }
  const double stored = bound == Bound::Upper ? (*learner.upper_q())(h, s, a) : (*learner.lower_q())(h, s, a);
  return std::abs(rebuilt - stored);
}

double audit_all_entries(const AmbLearner& learner, const UpdateHistory& history) {
  const Dims& d = learner.dims();
  double worst = 0.0;
  for (int h = 0; h < d.H; ++h) {
    for (int s = 0; s < d.S; ++s) {
      for (int a = 0; a < d.A; ++a) {
        if (history.at(h, s, a).empty()) continue;
        worst = std::max(worst, audit_unrolled_q(learner, h, s, a, history, Bound::Upper));
        worst = std::max(worst, audit_unrolled_q(learner, h, s, a, history, Bound::Lower));
      }
    }
  }
  return worst;
}

}  // namespace regretlab
