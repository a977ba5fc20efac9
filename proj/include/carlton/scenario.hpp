#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "carlton/rng.hpp"

namespace carlton {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

double distance(const Point& a, const Point& b);

/// World-generation knobs. Distances in meters.
struct GenerationParams {
    double u1_m = 400.0;              // first center ~ U[-u1*N, u1*N]^2
    double x1_m = 50.0;               // chained-center radius range
    double x2_m = 500.0;
    double user_spread_std_m = 50.0;  // isotropic Gaussian around the center
    int users_min = 2;
    int users_max = 15;

    void validate() const;
    friend bool operator==(const GenerationParams&, const GenerationParams&) = default;
};

struct Network {
    std::vector<Point> users;
    int manager = 0;

    int user_count() const { return static_cast<int>(users.size()); }
    friend bool operator==(const Network&, const Network&) = default;
};

struct Scenario {
    std::vector<Network> networks;
    std::vector<Point> centers;
    GenerationParams params;
    std::uint64_t seed = 0;

    int network_count() const { return static_cast<int>(networks.size()); }
    int total_users() const;
    void validate() const;
    friend bool operator==(const Scenario&, const Scenario&) = default;
};

std::vector<Point> generate_centers(int n_networks, const GenerationParams& params, Rng& rng);

/// Medoid under Euclidean distance; ties go to the lowest index.
int elect_manager(std::span<const Point> users);

Scenario generate_scenario(int n_networks, const GenerationParams& params, Rng& rng);
Scenario generate_scenario(int n_networks, const GenerationParams& params, std::uint64_t seed);

inline constexpr int kScenarioFormatVersion = 1;

std::string serialize_scenario(const Scenario& scenario);
Scenario load_scenario(std::string_view text);
Scenario load_scenario_file(const std::string& path);
void save_scenario_file(const Scenario& scenario, const std::string& path);

} // namespace carlton
