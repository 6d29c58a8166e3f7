#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace jitune {

struct NumericDim {
    std::string name;
    double lo = 0.0;
    double hi = 1.0;
    bool integer = false;
    bool log_scale = false;
};

struct CategoricalDim {
    std::string name;
    std::vector<std::string> choices;
};

using Dim = std::variant<NumericDim, CategoricalDim>;

// A point in a HyperparameterSpace; values align with the space's dims.
struct Configuration {
    using Value = std::variant<double, std::string>;
    std::vector<Value> values;

    double num(std::size_t i) const { return std::get<double>(values[i]); }
    const std::string& cat(std::size_t i) const {
        return std::get<std::string>(values[i]);
    }
};

struct HyperparameterSpace {
    std::vector<Dim> dims;

    std::size_t size() const { return dims.size(); }
    const std::string& name(std::size_t i) const;
    int index_of(const std::string& name) const;  // -1 when absent

    // Throws when the configuration violates bounds, integrality, or choice
    // membership.
    void validate(const Configuration& config) const;
    bool contains(const Configuration& config) const;

    // Midpoint of each numeric range (geometric for log dims, rounded for
    // integer dims) and the first choice of each categorical dim.
    Configuration default_configuration() const;
};

// Latin hypercube sample of r configurations. Each numeric range (its log
// transform for log dims) is cut into r equal strata holding exactly one
// sample each, with strata assigned by an independent seeded permutation per
// dim. Integer dims round to nearest. Categorical dims cycle through a
// seeded shuffle of the choices, so counts differ by at most one.
std::vector<Configuration> lhs_sample(const HyperparameterSpace& space,
                                      std::size_t r, std::uint64_t seed);

// One configuration drawn uniformly per dim (log-uniform for log dims).
class Rng;
Configuration uniform_sample(const HyperparameterSpace& space, Rng& rng);

// Shrinks each numeric range to (1 - alpha) of its width, centered on best
// and shifted (not clipped) back inside the original bounds. Categorical
// dims collapse to best's choice when alpha >= 0.5.
HyperparameterSpace trim_space(const HyperparameterSpace& space,
                               const Configuration& best, double alpha);

// Space definition file: one dim per line,
//   name num <lo> <hi> [int] [log]
//   name cat <c1,c2,...>
HyperparameterSpace parse_space(std::istream& in);
HyperparameterSpace parse_space_file(const std::string& path);
void write_space(const HyperparameterSpace& space, std::ostream& out);

nlohmann::ordered_json config_to_json(const HyperparameterSpace& space,
                                      const Configuration& config);
Configuration config_from_json(const HyperparameterSpace& space,
                               const nlohmann::json& j);

// "key=value" lines for the plugin protocol.
std::string config_to_keyvalues(const HyperparameterSpace& space,
                                const Configuration& config);

}  // namespace jitune
