// Copyright 2026 The meanking Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "meanking/strategies.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <vector>

namespace meanking {

namespace {

constexpr double kPi = std::numbers::pi;

struct Candidate {
    double value = -1.0;
    std::size_t prep = 0;
    std::size_t meas = 0;
};

// Strictly better value wins; otherwise the earlier (prep, meas) index pair,
// which is the lexicographic angle order of the grid.
bool better(const Candidate& a, const Candidate& b) {
    if (a.value != b.value) return a.value > b.value;
    if (a.prep != b.prep) return a.prep < b.prep;
    return a.meas < b.meas;
}

std::array<double, 3> bloch_of(const StateVector& psi) {
    const Amplitude a = psi[0];
    const Amplitude b = psi[1];
    const Amplitude c = std::conj(a) * b;
    return {2.0 * c.real(), 2.0 * c.imag(), std::norm(a) - std::norm(b)};
}

class Grid {
  public:
    explicit Grid(int resolution) : res_(resolution) {
        dirs_.reserve(static_cast<std::size_t>((res_ + 1) * res_));
        for (int i = 0; i <= res_; ++i) {
            for (int j = 0; j < res_; ++j) {
                dirs_.push_back({kPi * i / res_, 2.0 * kPi * j / res_});
            }
        }
    }
    std::size_t size() const { return dirs_.size(); }
    const BlochDirection& operator[](std::size_t k) const { return dirs_[k]; }
    double theta_step() const { return kPi / res_; }
    double phi_step() const { return 2.0 * kPi / res_; }

  private:
    int res_;
    std::vector<BlochDirection> dirs_;
};

// Per-direction Born probabilities cached once, so a (prep, meas) pair costs a
// handful of multiplications.
class ProjectionKernel {
  public:
    explicit ProjectionKernel(const Grid& grid) : overlap_(grid.size()) {
        const std::array<StateVector, 3> first_eigen = {polarization_ket(ProjectionLabel::plus),
                                                        polarization_ket(ProjectionLabel::r),
                                                        polarization_ket(ProjectionLabel::h)};
        for (std::size_t k = 0; k < grid.size(); ++k) {
            auto ket = grid[k].ket();
            for (int o = 0; o < 3; ++o) overlap_[k][o] = fidelity(first_eigen[o], ket);
        }
    }
    // a = |<b+|prep>|^2 and q = |<m|b+>|^2; the other eigenstate and the other
    // measurement outcome follow by completeness.
    double operator()(std::size_t prep, std::size_t meas) const {
        const auto& a = overlap_[prep];
        const auto& q = overlap_[meas];
        double total = 0.0;
        for (int o = 0; o < 3; ++o) {
            const double ap = a[o], am = 1.0 - a[o];
            const double qp = q[o], qm = 1.0 - q[o];
            total += std::max(ap * qp, am * qm) + std::max(ap * qm, am * qp);
        }
        return total / 3.0;
    }

  private:
    std::vector<std::array<double, 3>> overlap_;
};

// For pure qubit states |<m|psi>|^2 = (1 + n_m . n_psi)/2, so for a pair
// (U1, U2) the best guess collects
//   max(p1, p2) + max(1-p1, 1-p2) = 1 + |n_m . (s1 - s2)|/2
// summed over Alice's two outcomes, with s_i the Bloch vector of U_i|prep>.
class ChallengeKernel {
  public:
    explicit ChallengeKernel(const Grid& grid) : diff_(grid.size()), axis_(grid.size()) {
        std::array<Operator, 6> u;
        for (std::size_t k = 0; k < 6; ++k) u[k] = challenge_polarization_unitary(kUnitaryLabels[k]);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            auto ket = grid[k].ket();
            axis_[k] = grid[k].vector();
            for (int pair = 0; pair < 3; ++pair) {
                auto s1 = bloch_of(apply(u[2 * pair], ket));
                auto s2 = bloch_of(apply(u[2 * pair + 1], ket));
                for (int c = 0; c < 3; ++c) diff_[k][pair][c] = s1[c] - s2[c];
            }
        }
    }
    double operator()(std::size_t prep, std::size_t meas) const {
        const auto& d = diff_[prep];
        const auto& n = axis_[meas];
        double total = 0.0;
        for (int pair = 0; pair < 3; ++pair) {
            total += std::abs(n[0] * d[pair][0] + n[1] * d[pair][1] + n[2] * d[pair][2]);
        }
        return 0.5 + total / 12.0;
    }

  private:
    std::vector<std::array<std::array<double, 3>, 3>> diff_;
    std::vector<std::array<double, 3>> axis_;
};

template <class Kernel>
Candidate scan(const Kernel& kernel, std::size_t n, unsigned workers) {
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
    std::vector<Candidate> partial(workers);
    auto body = [&](unsigned w) {
        const std::size_t lo = n * w / workers;
        const std::size_t hi = n * (w + 1) / workers;
        Candidate best;
        for (std::size_t p = lo; p < hi; ++p) {
            for (std::size_t m = 0; m < n; ++m) {
                const double v = kernel(p, m);
                if (v > best.value) best = {v, p, m};
            }
        }
        partial[w] = best;
    };
    if (workers == 1) {
        body(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body, w);
    }
    Candidate best = partial.front();
    for (const auto& c : partial) {
        if (c.value >= 0.0 && better(c, best)) best = c;
    }
    return best;
}

// Maximizes f on [lo, hi] by golden-section search.
template <class F>
double golden_max(F&& f, double lo, double hi, double tol) {
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - g * (hi - lo);
    double x2 = lo + g * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    while (hi - lo > tol) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
    }
    return 0.5 * (lo + hi);
}

SingleQubitStrategy refine(Game game, SingleQubitStrategy s, double theta_step, double phi_step,
                           std::uint64_t& evaluations) {
    std::array<double, 4> x = {s.prep.theta, s.prep.phi, s.meas.theta, s.meas.phi};
    const std::array<double, 4> half = {theta_step, phi_step, theta_step, phi_step};
    auto value_at = [&](const std::array<double, 4>& y) {
        ++evaluations;
        return evaluate(game, {{y[0], y[1]}, {y[2], y[3]}});
    };
    double current = value_at(x);
    for (int sweep = 0; sweep < 50; ++sweep) {
        const double before = current;
        for (int c = 0; c < 4; ++c) {
            auto trial = x;
            auto line = [&](double t) {
                trial[c] = t;
                return value_at(trial);
            };
            const double t = golden_max(line, x[c] - half[c], x[c] + half[c], 1e-7);
            trial[c] = t;
            const double v = value_at(trial);
            if (v > current) {
                current = v;
                x = trial;
            }
        }
        if (current - before < 1e-13) break;
    }
    return {BlochDirection{x[0], x[1]}.canonical(), BlochDirection{x[2], x[3]}.canonical()};
}

}  // namespace

StateVector BlochDirection::ket() const {
    return StateVector(ModeBasis::polarization(),
                       {std::cos(theta / 2.0), std::polar(1.0, phi) * std::sin(theta / 2.0)});
}

std::array<double, 3> BlochDirection::vector() const {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

BlochDirection BlochDirection::opposite() const { return BlochDirection{kPi - theta, phi + kPi}.canonical(); }

BlochDirection BlochDirection::canonical() const {
    double t = std::fmod(theta, 2.0 * kPi);
    double p = phi;
    if (t < 0.0) t += 2.0 * kPi;
    if (t > kPi) {
        t = 2.0 * kPi - t;
        p += kPi;
    }
    p = std::fmod(p, 2.0 * kPi);
    if (p < 0.0) p += 2.0 * kPi;
    return {t, p};
}

BlochDirection BlochDirection::from_vector(double x, double y, double z) {
    const double n = std::sqrt(x * x + y * y + z * z);
    if (n == 0.0) throw std::invalid_argument("BlochDirection: zero vector");
    return BlochDirection{std::acos(std::clamp(z / n, -1.0, 1.0)), std::atan2(y, x)}.canonical();
}

double projection_game_threshold() { return (2.0 + 1.0 / std::sqrt(2.0)) / 3.0; }
double second_challenge_threshold() { return 5.0 / 6.0; }
double single_qubit_threshold(Game game) {
    return game == Game::Projection ? projection_game_threshold() : second_challenge_threshold();
}

double evaluate_projection_game(const SingleQubitStrategy& s) {
    const auto prep = s.prep.ket();
    const std::array<StateVector, 2> outcomes = {s.meas.ket(), s.meas.opposite().ket()};
    double total = 0.0;
    for (auto pair : kObservablePairs) {
        const auto eigen = members(pair);
        for (const auto& m : outcomes) {
            double best = 0.0;
            for (auto b : eigen) {
                const auto bk = polarization_ket(b);
                best = std::max(best, fidelity(bk, prep) * fidelity(m, bk));
            }
            total += best;
        }
    }
    return total / 3.0;
}

double evaluate_second_challenge(const SingleQubitStrategy& s) {
    const auto prep = s.prep.ket();
    const std::array<StateVector, 2> outcomes = {s.meas.ket(), s.meas.opposite().ket()};
    double total = 0.0;
    for (auto pair : kChallengePairs) {
        const auto [u1, u2] = challenge_members(pair);
        const auto post1 = apply(challenge_polarization_unitary(u1), prep);
        const auto post2 = apply(challenge_polarization_unitary(u2), prep);
        for (const auto& m : outcomes) total += std::max(fidelity(m, post1), fidelity(m, post2));
    }
    return total / 6.0;
}

double evaluate(Game game, const SingleQubitStrategy& s) {
    return game == Game::Projection ? evaluate_projection_game(s) : evaluate_second_challenge(s);
}

SearchResult search_optimum(Game game, int resolution, unsigned workers, bool allow_coarse) {
    if (resolution < (allow_coarse ? 4 : 64)) {
        throw std::invalid_argument("search resolution must be at least 64 steps per angle");
    }
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    const auto start = std::chrono::steady_clock::now();

    const Grid grid(resolution);
    Candidate best = game == Game::Projection ? scan(ProjectionKernel(grid), grid.size(), workers)
                                              : scan(ChallengeKernel(grid), grid.size(), workers);

    SearchResult out;
    out.game = game;
    out.resolution = resolution;
    out.evaluations = static_cast<std::uint64_t>(grid.size()) * grid.size();
    const SingleQubitStrategy on_grid{grid[best.prep], grid[best.meas]};
    out.grid_value = evaluate(game, on_grid);
    out.argmax = refine(game, on_grid, grid.theta_step(), grid.phi_step(), out.evaluations);
    out.value = evaluate(game, out.argmax);
    if (out.value < out.grid_value) {
        out.value = out.grid_value;
        out.argmax = on_grid;
    }
    out.runtime_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return out;
}

SearchResult search_projection_optimum(int resolution, unsigned workers) {
    return search_optimum(Game::Projection, resolution, workers);
}

SearchResult search_second_challenge_optimum(int resolution, unsigned workers) {
    return search_optimum(Game::SecondChallenge, resolution, workers);
}

}  // namespace meanking
