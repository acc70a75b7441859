#include "branchtarget/scenario.hpp"

#include "branchtarget/errors.hpp"
#include "branchtarget/report.hpp"

#include <json.hpp>

#include <cmath>
#include <limits>

namespace bt {

void FintechParams::validate() const {
    if (!(c > 0.0)) throw InputError("fintech: c must be > 0");
    if (!(kappa > 0.0)) throw InputError("fintech: kappa must be > 0");
    if (!(strike0 >= 0.0)) throw InputError("fintech: strike0 must be >= 0");
    if (!(horizon > 0.0)) throw InputError("fintech: horizon must be > 0");
    if (n_controls < 2) throw InputError("fintech: need at least 2 control points");
    for (const auto& [label, k] : strike_table)
        if (!(k >= 0.0)) throw InputError("fintech: negative strike for " + label.str());
}

double FintechParams::strike_bound_excess() const {
    const double bound = effective_strike_bound();
    double worst = strike0 - bound;
    for (const auto& [label, k] : strike_table) worst = std::max(worst, k - bound);
    return worst;
}

double FintechParams::effective_strike_bound() const {
    if (strike_bound) return *strike_bound;
    double bound = strike0;
    for (const auto& [label, k] : strike_table) bound = std::max(bound, k);
    return bound;
}

double FintechParams::strike(const Label& label) const {
    if (const auto it = strike_table.find(label); it != strike_table.end()) return it->second;
    return strike0 * std::pow(2.0, -static_cast<double>(digit_sum(label)));
}

double FintechParams::lower_bound(double t) const {
    const double sharpe = (b - r) / c;
    return -(sharpe * sharpe + r) * (horizon - t) + std::log(kappa);
}

double FintechParams::upper_bound(double t) const {
    return -r * (horizon - t) + std::log(effective_strike_bound() + kappa);
}

Scenario fintech_scenario(const FintechParams& params, OffspringLaw law) {
    params.validate();
    law.validate();

    Scenario s;
    s.kind = "fintech";
    s.law = std::move(law);
    s.fintech = params;
    s.slope_cone = std::make_pair(0.0, 1.0);

    CoefficientModel& m = s.model;
    m.dim_x = 1;
    m.dim_noise = 1;
    m.controls.resize(static_cast<std::size_t>(params.n_controls));
    for (int i = 0; i < params.n_controls; ++i)
        m.controls[static_cast<std::size_t>(i)] =
            static_cast<double>(i) / static_cast<double>(params.n_controls - 1);
    const double b = params.b, c = params.c, r = params.r;
    m.lipschitz = std::max({std::abs(b - 0.5 * c * c), c, std::abs(b - r) + 0.5 * c * c});
    m.control_modulus = 1.0;
    m.target_drift_in_y = false;
    m.drift = [b, c](std::span<const double>, double, std::span<double> out) {
        out[0] = b - 0.5 * c * c;
    };
    m.diffusion = [c](std::span<const double>, double, std::span<double> out) { out[0] = c; };
    m.target_drift = [b, c, r](std::span<const double>, double, double a) {
        return (b - r) * a - 0.5 * c * c * a * a + r;
    };
    m.target_diffusion = [c](std::span<const double>, double a, std::span<double> out) {
        out[0] = c * a;
    };

    s.target.horizon = params.horizon;
    const FintechParams p = params;
    s.target.payoff = [p](const Label& label, std::span<const double> x) {
        for (const auto d : label.digits())
            if (d >= p.zero_index_bound) return 0.0;
        const double k = p.strike(label);
        const double intrinsic = std::max(k - std::exp(x[0]), 0.0);
        return std::log(intrinsic + p.kappa);
    };
    return s;
}

namespace {

using nlohmann::json;

OffspringLaw parse_law(const json& j) {
    OffspringLaw law;
    if (!j.contains("gamma")) throw InputError("scenario: missing gamma");
    law.gamma = j.at("gamma").get<double>();
    if (!j.contains("offspring")) throw InputError("scenario: missing offspring pmf");
    for (const auto& e : j.at("offspring")) {
        if (!e.is_array() || e.size() != 2)
            throw InputError("scenario: offspring entries must be [k, p] pairs");
        law.pmf.emplace_back(e.at(0).get<unsigned>(), e.at(1).get<double>());
    }
    law.validate();
    return law;
}

struct Affine {
    double c0 = 0, cx = 0, ca = 0;
    double operator()(double x, double a) const { return c0 + cx * x + ca * a; }
};

Affine parse_affine(const json& j) {
    Affine f;
    f.c0 = j.value("c0", 0.0);
    f.cx = j.value("cx", 0.0);
    f.ca = j.value("ca", 0.0);
    return f;
}

Scenario parse_custom(const json& j) {
    Scenario s;
    s.kind = "custom";
    s.law = parse_law(j);
    s.target.horizon = j.value("T", 1.0);
    if (!(s.target.horizon > 0.0)) throw InputError("scenario: T must be > 0");

    CoefficientModel& m = s.model;
    m.dim_x = 1;
    m.dim_noise = 1;
    if (j.contains("control_grid")) {
        m.controls = j.at("control_grid").get<std::vector<double>>();
    } else {
        m.controls.resize(101);
        for (int i = 0; i < 101; ++i) m.controls[static_cast<std::size_t>(i)] = i / 100.0;
    }

    const json& co = j.at("coefficients");
    const Affine drift = parse_affine(co.value("drift", json::object()));
    const Affine diff = parse_affine(co.value("diffusion", json::object()));
    const Affine tdiff = parse_affine(co.value("target_diffusion", json::object()));
    const json& td = co.value("target_drift", json::object());
    const double td_c0 = td.value("c0", 0.0), td_cx = td.value("cx", 0.0),
                 td_cy = td.value("cy", 0.0), td_ca = td.value("ca", 0.0),
                 td_caa = td.value("caa", 0.0);

    m.lipschitz = std::abs(drift.cx) + std::abs(diff.cx) + std::abs(td_cx) + std::abs(td_cy);
    m.control_modulus = 1.0;
    m.target_drift_in_y = td_cy != 0.0;
    m.drift = [drift](std::span<const double> x, double a, std::span<double> out) {
        out[0] = drift(x[0], a);
    };
    m.diffusion = [diff](std::span<const double> x, double a, std::span<double> out) {
        out[0] = diff(x[0], a);
    };
    m.target_drift = [=](std::span<const double> x, double y, double a) {
        return td_c0 + td_cx * x[0] + td_cy * y + td_ca * a + td_caa * a * a;
    };
    m.target_diffusion = [tdiff](std::span<const double> x, double a, std::span<double> out) {
        out[0] = tdiff(x[0], a);
    };

    const json& pay = j.at("payoff");
    const std::string kind = pay.at("kind").get<std::string>();
    if (kind == "zero") {
        s.target.payoff = [](const Label&, std::span<const double>) { return 0.0; };
    } else if (kind == "none") {
        s.target.payoff = [](const Label&, std::span<const double>) {
            return -std::numeric_limits<double>::infinity();
        };
    } else if (kind == "affine") {
        const double c0 = pay.value("c0", 0.0), cx = pay.value("cx", 0.0);
        s.target.payoff = [c0, cx](const Label&, std::span<const double> x) {
            return c0 + cx * x[0];
        };
    } else if (kind == "call_log") {
        const double k0 = pay.value("strike_log", 0.0);
        const double slope = pay.value("slope", 1.0);
        s.target.payoff = [k0, slope](const Label&, std::span<const double> x) {
            return slope * std::max(x[0] - k0, 0.0);
        };
    } else if (kind == "put_log") {
        FintechParams p;
        p.strike0 = pay.value("strike0", 1.0);
        p.kappa = pay.value("kappa", 0.1);
        p.zero_index_bound = pay.value("zero_index_bound", 8u);
        p.horizon = s.target.horizon;
        const FintechParams pc = p;
        s.target.payoff = [pc](const Label& label, std::span<const double> x) {
            for (const auto d : label.digits())
                if (d >= pc.zero_index_bound) return 0.0;
            return std::log(std::max(pc.strike(label) - std::exp(x[0]), 0.0) + pc.kappa);
        };
    } else {
        throw InputError("scenario: unknown payoff kind '" + kind + "'");
    }

    if (j.contains("slope_cone")) {
        const auto cone = j.at("slope_cone").get<std::vector<double>>();
        if (cone.size() != 2 || !(cone[0] <= cone[1]))
            throw InputError("scenario: slope_cone must be [lo, hi] with lo <= hi");
        s.slope_cone = std::make_pair(cone[0], cone[1]);
    }
    m.validate();
    return s;
}

Scenario parse_fintech(const json& j) {
    FintechParams p;
    p.b = j.value("b", 0.1);
    p.c = j.value("c", 0.2);
    p.r = j.value("r", 0.02);
    p.kappa = j.value("kappa", 0.1);
    p.strike0 = j.value("strike0", 1.0);
    p.horizon = j.value("T", 1.0);
    p.zero_index_bound = j.value("zero_index_bound", 8u);
    p.n_controls = j.value("n_controls", 101);
    if (j.contains("strike_bound")) p.strike_bound = j.at("strike_bound").get<double>();
    if (j.contains("strikes")) {
        for (const auto& [key, value] : j.at("strikes").items())
            p.strike_table[Label::parse(key)] = value.get<double>();
    }
    return fintech_scenario(p, parse_law(j));
}

} // namespace

Scenario scenario_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InputError(std::string("scenario: JSON parse failure: ") + e.what());
    }
    try {
        const std::string kind = j.at("kind").get<std::string>();
        Scenario s = kind == "fintech"  ? parse_fintech(j)
                     : kind == "custom" ? parse_custom(j)
                                        : throw InputError("scenario: unknown kind '" + kind + "'");
        s.source_digest = hex64(fnv1a64(text));
        return s;
    } catch (const json::exception& e) {
        throw InputError(std::string("scenario: ") + e.what());
    }
}

Scenario load_scenario(const std::string& path) {
    const std::string bytes = read_file_bytes(path);
    Scenario s = scenario_from_json_text(bytes);
    s.source_path = path;
    return s;
}

} // namespace bt
