#include "carlton/scenario.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "carlton/errors.hpp"

namespace carlton {

using nlohmann::json;

double distance(const Point& a, const Point& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

void GenerationParams::validate() const {
    if (!(u1_m >= 0.0)) throw DomainError("u1_m must be >= 0");
    if (!(x1_m >= 0.0) || !(x1_m <= x2_m)) throw DomainError("radius range requires 0 <= x1 <= x2");
    if (!(user_spread_std_m >= 0.0)) throw DomainError("user_spread_std_m must be >= 0");
    if (users_min < 2 || users_min > users_max)
        throw DomainError("users interval must satisfy 2 <= users_min <= users_max");
}

int Scenario::total_users() const {
    int total = 0;
    for (const auto& net : networks) total += net.user_count();
    return total;
}

void Scenario::validate() const {
    if (networks.empty()) throw DomainError("scenario has no networks");
    if (centers.size() != networks.size()) throw DomainError("centers/networks size mismatch");
    for (std::size_t n = 0; n < networks.size(); ++n) {
        const auto& net = networks[n];
        if (net.users.empty())
            throw DomainError("network " + std::to_string(n) + " has no users");
        if (net.manager < 0 || net.manager >= net.user_count())
            throw DomainError("network " + std::to_string(n) + " manager index out of range");
    }
}

std::vector<Point> generate_centers(int n_networks, const GenerationParams& params, Rng& rng) {
    if (n_networks < 1) throw DomainError("generate_centers: n_networks must be >= 1");
    params.validate();

    const double half = params.u1_m * n_networks;
    std::uniform_real_distribution<double> first(-half, half);
    std::uniform_real_distribution<double> radius(params.x1_m, params.x2_m);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);

    std::vector<Point> centers;
    centers.reserve(static_cast<std::size_t>(n_networks));
    const double x0 = first(rng);
    const double y0 = first(rng);
    centers.push_back({x0, y0});
    for (int i = 1; i < n_networks; ++i) {
        const int anchor = uniform_int(rng, 0, i - 1);
        const double r = radius(rng);
        const double theta = angle(rng);
        const Point& c = centers[static_cast<std::size_t>(anchor)];
        centers.push_back({c.x + r * std::cos(theta), c.y + r * std::sin(theta)});
    }
    return centers;
}

int elect_manager(std::span<const Point> users) {
    if (users.empty()) throw DomainError("elect_manager: empty network");
    int best = 0;
    double best_sum = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < users.size(); ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < users.size(); ++j)
            if (i != j) sum += distance(users[i], users[j]);
        if (sum < best_sum) {
            best_sum = sum;
            best = static_cast<int>(i);
        }
    }
    return best;
}

Scenario generate_scenario(int n_networks, const GenerationParams& params, Rng& rng) {
    params.validate();
    Scenario s;
    s.params = params;
    s.centers = generate_centers(n_networks, params, rng);
    std::normal_distribution<double> spread(0.0, params.user_spread_std_m);
    for (const auto& c : s.centers) {
        Network net;
        const int m = uniform_int(rng, params.users_min, params.users_max);
        net.users.reserve(static_cast<std::size_t>(m));
        for (int u = 0; u < m; ++u) {
            const double dx = spread(rng);
            const double dy = spread(rng);
            net.users.push_back({c.x + dx, c.y + dy});
        }
        net.manager = elect_manager(net.users);
        s.networks.push_back(std::move(net));
    }
    return s;
}

Scenario generate_scenario(int n_networks, const GenerationParams& params, std::uint64_t seed) {
    Rng rng = make_rng(seed, {0x5ce7a210ULL});
    Scenario s = generate_scenario(n_networks, params, rng);
    s.seed = seed;
    return s;
}

// ---- serialization ------------------------------------------------------

namespace {

json point_to_json(const Point& p) { return json::array({p.x, p.y}); }

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ParseError("scenario " + where + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object()) fail(where, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(where.empty() ? std::string(key) : where + "." + key, "missing field");
    return *it;
}

double require_number(const json& obj, const char* key, const std::string& where) {
    const json& v = require(obj, key, where);
    if (!v.is_number()) fail(where + "." + key, "expected a number");
    return v.get<double>();
}

int require_int(const json& obj, const char* key, const std::string& where) {
    const json& v = require(obj, key, where);
    if (!v.is_number_integer()) fail(where + "." + key, "expected an integer");
    return v.get<int>();
}

Point parse_point(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        fail(where, "expected [x, y]");
    return {v[0].get<double>(), v[1].get<double>()};
}

} // namespace

std::string serialize_scenario(const Scenario& s) {
    json doc;
    doc["version"] = kScenarioFormatVersion;
    doc["seed"] = s.seed;
    doc["params"] = {
        {"u1_m", s.params.u1_m},
        {"x1_m", s.params.x1_m},
        {"x2_m", s.params.x2_m},
        {"user_spread_std_m", s.params.user_spread_std_m},
        {"users_min", s.params.users_min},
        {"users_max", s.params.users_max},
    };
    json centers = json::array();
    for (const auto& c : s.centers) centers.push_back(point_to_json(c));
    doc["centers"] = std::move(centers);
    json nets = json::array();
    for (const auto& n : s.networks) {
        json users = json::array();
        for (const auto& u : n.users) users.push_back(point_to_json(u));
        nets.push_back({{"users", std::move(users)}, {"manager", n.manager}});
    }
    doc["networks"] = std::move(nets);
    return doc.dump(2) + "\n";
}

Scenario load_scenario(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("scenario: ") + e.what());
    }

    const json& version = require(doc, "version", "");
    if (!version.is_number_integer()) fail("version", "expected an integer");
    if (version.get<int>() != kScenarioFormatVersion)
        throw ParseError("scenario: unsupported version " + version.dump() + " (expected " +
                         std::to_string(kScenarioFormatVersion) + ")");

    Scenario s;
    const json& seed = require(doc, "seed", "");
    if (!seed.is_number_unsigned() && !seed.is_number_integer()) fail("seed", "expected an integer");
    s.seed = seed.get<std::uint64_t>();

    const json& p = require(doc, "params", "");
    s.params.u1_m = require_number(p, "u1_m", "params");
    s.params.x1_m = require_number(p, "x1_m", "params");
    s.params.x2_m = require_number(p, "x2_m", "params");
    s.params.user_spread_std_m = require_number(p, "user_spread_std_m", "params");
    s.params.users_min = require_int(p, "users_min", "params");
    s.params.users_max = require_int(p, "users_max", "params");

    const json& centers = require(doc, "centers", "");
    if (!centers.is_array()) fail("centers", "expected an array");
    for (std::size_t i = 0; i < centers.size(); ++i)
        s.centers.push_back(parse_point(centers[i], "centers[" + std::to_string(i) + "]"));

    const json& nets = require(doc, "networks", "");
    if (!nets.is_array()) fail("networks", "expected an array");
    for (std::size_t n = 0; n < nets.size(); ++n) {
        const std::string where = "networks[" + std::to_string(n) + "]";
        Network net;
        const json& users = require(nets[n], "users", where);
        if (!users.is_array()) fail(where + ".users", "expected an array");
        for (std::size_t u = 0; u < users.size(); ++u)
            net.users.push_back(parse_point(users[u], where + ".users[" + std::to_string(u) + "]"));
        net.manager = require_int(nets[n], "manager", where);
        s.networks.push_back(std::move(net));
    }

    try {
        s.validate();
    } catch (const DomainError& e) {
        throw ParseError(std::string("scenario: ") + e.what());
    }
    return s;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open scenario file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return load_scenario(buf.str());
}

void save_scenario_file(const Scenario& scenario, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write scenario file " + path);
    out << serialize_scenario(scenario);
}

} // namespace carlton
