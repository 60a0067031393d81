#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace regretlab {

/// Shape of an episodic tabular problem. Steps, states and actions are 0-based.
struct Dims {
  int H = 0;
  int S = 0;
  int A = 0;

  friend bool operator==(const Dims&, const Dims&) = default;
};

/// Dense [h][s][a] table of doubles.
class QTable {
 public:
  QTable() = default;
  QTable(Dims dims, double fill) : dims_(dims), data_(size_of(dims), fill) {}

  double& operator()(int h, int s, int a) { return data_[index(h, s, a)]; }
  double operator()(int h, int s, int a) const { return data_[index(h, s, a)]; }

  std::span<double> row(int h, int s) {
    return {data_.data() + index(h, s, 0), static_cast<std::size_t>(dims_.A)};
  }
  std::span<const double> row(int h, int s) const {
    return {data_.data() + index(h, s, 0), static_cast<std::size_t>(dims_.A)};
  }

  const Dims& dims() const { return dims_; }
  const std::vector<double>& values() const { return data_; }

 private:
  static std::size_t size_of(Dims d) {
    return static_cast<std::size_t>(d.H) * static_cast<std::size_t>(d.S) * static_cast<std::size_t>(d.A);
  }
  std::size_t index(int h, int s, int a) const {
    return (static_cast<std::size_t>(h) * static_cast<std::size_t>(dims_.S) + static_cast<std::size_t>(s)) *
               static_cast<std::size_t>(dims_.A) +
           static_cast<std::size_t>(a);
  }

  Dims dims_{};
  std::vector<double> data_;
};

/// Dense [h][s] table of doubles with `levels` steps. Value tables use H+1
/// levels so that level H is the terminal zero.
class VTable {
 public:
  VTable() = default;
  VTable(int levels, int states, double fill)
      : levels_(levels), states_(states), data_(static_cast<std::size_t>(levels) * static_cast<std::size_t>(states), fill) {}

  double& operator()(int h, int s) { return data_[index(h, s)]; }
  double operator()(int h, int s) const { return data_[index(h, s)]; }

  std::span<const double> level(int h) const {
    return {data_.data() + index(h, 0), static_cast<std::size_t>(states_)};
  }

  int levels() const { return levels_; }
  int states() const { return states_; }
  const std::vector<double>& values() const { return data_; }

 private:
  std::size_t index(int h, int s) const {
    return static_cast<std::size_t>(h) * static_cast<std::size_t>(states_) + static_cast<std::size_t>(s);
  }

  int levels_ = 0;
  int states_ = 0;
  std::vector<double> data_;
};

/// Deterministic non-stationary policy: one action per (h, s).
class Policy {
 public:
  Policy() = default;
  Policy(int H, int S, int fill = 0) : H_(H), S_(S), actions_(static_cast<std::size_t>(H) * static_cast<std::size_t>(S), fill) {}

  int& operator()(int h, int s) { return actions_[index(h, s)]; }
  int operator()(int h, int s) const { return actions_[index(h, s)]; }

  int horizon() const { return H_; }
  int states() const { return S_; }
  const std::vector<int>& actions() const { return actions_; }

  friend bool operator==(const Policy&, const Policy&) = default;

 private:
  std::size_t index(int h, int s) const {
    return static_cast<std::size_t>(h) * static_cast<std::size_t>(S_) + static_cast<std::size_t>(s);
  }

  int H_ = 0;
  int S_ = 0;
  std::vector<int> actions_;
};

}  // namespace regretlab
