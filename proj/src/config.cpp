#include "hklab/config.hpp"

#include <fstream>

namespace hklab {

DomainSpec domain_from_json(const json& j) {
    const std::string kind = j.value("kind", "");
    try {
        if (kind == "ball") return DomainSpec::ball_domain(j.at("dim").get<int>(), j.at("radius").get<double>());
        if (kind == "box") {
            const auto lo = j.at("lo").get<std::vector<double>>();
            const auto hi = j.at("hi").get<std::vector<double>>();
            return DomainSpec::box_domain(Eigen::Map<const Vec>(lo.data(), lo.size()),
                                          Eigen::Map<const Vec>(hi.data(), hi.size()));
        }
        if (kind == "polygon") {
            std::vector<Eigen::Vector2d> verts;
            for (const auto& v : j.at("vertices")) verts.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
            return DomainSpec::polygon_domain(std::move(verts));
        }
        if (kind == "ellipse") return DomainSpec::ellipse_domain(j.at("a").get<double>(), j.at("b").get<double>());
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed domain block: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid domain: ") + e.what());
    }
    throw ConfigError("domain.kind must be ball|box|polygon|ellipse");
}

RunConfig parse_config(const json& j) {
    RunConfig cfg;
    cfg.raw = j;
    if (!j.contains("domain")) throw ConfigError("missing domain block");
    cfg.domain = domain_from_json(j.at("domain"));
    try {
        const auto& grid = j.at("grid");
        cfg.h = grid.at("h").get<double>();
        cfg.stagger = grid.value("stagger", true);
        if (!(cfg.h > 0)) throw ConfigError("grid.h must be positive");
        if (cfg.h > cfg.domain.inradius() / 2)
            throw ConfigError("grid.h too coarse for the domain");
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed grid block: ") + e.what());
    }
    if (j.contains("operator")) {
        const auto& op = j.at("operator");
        try {
            cfg.family = family_from_name(op.value("family", "laplace"));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        cfg.params.c = op.value("c", 0.0);
        cfg.params.weight.lambda = op.value("lambda", 0.0);
        cfg.params.weight.alpha = op.value("alpha", 0.0);
        // admissibility gates before any compute
        const int N = cfg.domain.dim;
        if (cfg.family == Family::Kc && !(cfg.params.c > 0 && cfg.params.c <= sqr(N - 2) / 4.0))
            throw ConfigError("Kc requires c in (0, (N-2)^2/4]");
        if (cfg.family == Family::Hc && !(cfg.params.c > 0 && cfg.params.c <= 0.25))
            throw ConfigError("Hc requires c in (0, 1/4]");
        if (cfg.family == Family::Lweighted &&
            !(cfg.params.weight.alpha >= 0 && cfg.params.weight.lambda <= 0 &&
              cfg.params.weight.lambda > -N))
            throw ConfigError("L requires alpha >= 0 and lambda in (-N, 0]");
        if ((cfg.family == Family::K || cfg.family == Family::Kc) && N < 3)
            throw ConfigError("K/Kc require N >= 3");
    }
    cfg.task = j.value("task", json::object());
    if (j.contains("output")) cfg.out_dir = j.at("output").value("dir", "out");
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(j);
}

std::string RunConfig::fingerprint() const {
    json canon;
    canon["domain"] = raw.value("domain", json::object());
    canon["grid"] = {{"h", h}, {"stagger", stagger}};
    canon["operator"] = {{"family", family_name(family)},
                         {"c", params.c},
                         {"lambda", params.weight.lambda},
                         {"alpha", params.weight.alpha}};
    return fnv1a_hex(canon.dump());
}

}  // namespace hklab
