#ifndef LIEODE_JSON_IO_HPP
#define LIEODE_JSON_IO_HPP

#include <json.hpp>

#include "noether.hpp"
#include "numerics.hpp"
#include "parse.hpp"
#include "symmetry.hpp"

namespace lieode {

using ordered_json = nlohmann::ordered_json;

inline ordered_json generator_json(const VectorField& vf) {
    return ordered_json{{"label", vf.label}, {"xi", to_string(vf.xi)}, {"eta", to_string(vf.eta)}};
}

inline ordered_json catalog_json(const EquationSpec& eq, const std::vector<VectorField>& fields,
                                 int dimension) {
    ordered_json gens = ordered_json::array();
    for (const auto& vf : fields) gens.push_back(generator_json(vf));
    return ordered_json{
        {"command", "classify"}, {"n", eq.n},          {"f", eq.fspec()},
        {"dimension", dimension}, {"generators", gens},
    };
}

inline ordered_json verdict_json(const NoetherVerdict& v) {
    ordered_json j;
    switch (v.kind) {
        case NoetherVerdict::Kind::variational: j["kind"] = "Variational"; break;
        case NoetherVerdict::Kind::divergence: j["kind"] = "Divergence"; break;
        case NoetherVerdict::Kind::not_noether: j["kind"] = "NotNoether"; break;
    }
    if (v.gauge) j["gauge"] = to_string(*v.gauge);
    if (v.residual) j["residual"] = to_string(*v.residual);
    return j;
}

inline ordered_json invariance_json(const VectorField& vf, const InvarianceResult& r) {
    ordered_json j{{"generator", generator_json(vf)}, {"invariant", r.invariant}};
    if (!r.invariant) j["residual"] = to_string(r.residual);
    return j;
}

inline ordered_json drift_json(const Trajectory& traj, const std::string& integral_id, double value) {
    return ordered_json{
        {"command", "drift"},
        {"n", traj.eq.n},
        {"integral", integral_id},
        {"drift", value},
        {"samples", traj.samples.size()},
        {"complete", traj.complete},
    };
}

} // namespace lieode

#endif
