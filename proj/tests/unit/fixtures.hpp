#pragma once

#include <array>
#include <random>
#include <vector>

#include "pfreal/survey.hpp"

namespace fixtures {

inline constexpr pfreal::Susceptances kTable1{1.612, -4.649, -5.472, -7.504, 10.05, -13.571};

// The eight nonconstant real solutions: (Vd2, Vq2, Vd3, Vq3, Vd4, Vq4).
inline const std::vector<std::array<double, 6>> kTable2Nonconstant{
    {0.30976, -0.95082, -0.82212, -0.56932, -0.97906, 0.20359},
    {-0.88313, 0.46912, 0.97310, 0.23039, 0.99834, -0.05754},
    {0.57067, -0.82118, -0.61912, 0.78530, 0.41658, -0.90910},
    {0.89239, -0.45127, 0.84624, -0.53281, -0.94751, 0.31973},
    {-0.88313, -0.46912, 0.97310, -0.23039, 0.99834, 0.05754},
    {0.57067, 0.82118, -0.61912, -0.78530, 0.41658, 0.90910},
    {0.30975, 0.95082, -0.82212, 0.56932, -0.97906, -0.20359},
    {0.89239, 0.45127, 0.84624, 0.53281, -0.94751, -0.31973},
};

inline pfreal::PowerSystem table1() { return pfreal::four_bus_network(kTable1); }

inline pfreal::PowerSystem two_bus(double b, double p) {
  pfreal::PowerSystem ps;
  ps.buses = {{1, pfreal::BusKind::slack, 1.0, 0.0, 0.0}, {2, pfreal::BusKind::pv, 1.0, p, 0.0}};
  ps.lines = {{1, 2, b}};
  return ps;
}

inline pfreal::Susceptances random_b(std::mt19937_64& rng, double sigma = 8.0) {
  std::normal_distribution<double> n(0.0, sigma);
  pfreal::Susceptances b;
  for (auto& x : b) x = n(rng);
  return b;
}

}  // namespace fixtures
