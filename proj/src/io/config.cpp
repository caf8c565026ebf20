#include "rmm/io/config.hpp"

#include "rmm/core/errors.hpp"
#include "rmm/mm/sizes.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace rmm::io {

using nlohmann::json;

namespace {

/// Object view that records which keys were read and rejects the rest.
class Section {
public:
    Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(where() + " must be an object");
    }

    const json& get(const std::string& key) {
        used_.insert(key);
        if (!j_.contains(key)) throw ConfigError("missing key '" + sub(key) + "'");
        return j_.at(key);
    }

    const json* find(const std::string& key) {
        used_.insert(key);
        if (!j_.contains(key) || j_.at(key).is_null()) return nullptr;
        return &j_.at(key);
    }

    double number(const std::string& key) { return as_number(get(key), sub(key)); }
    double number(const std::string& key, double fallback) {
        const json* v = find(key);
        return v ? as_number(*v, sub(key)) : fallback;
    }
    std::uint64_t count(const std::string& key, std::uint64_t fallback) {
        const json* v = find(key);
        if (!v) return fallback;
        if (!v->is_number_integer() && !v->is_number_unsigned())
            throw ConfigError("key '" + sub(key) + "' must be a non-negative integer");
        if (v->is_number_integer() && v->get<std::int64_t>() < 0)
            throw ConfigError("key '" + sub(key) + "' must be a non-negative integer");
        return v->get<std::uint64_t>();
    }
    int integer(const std::string& key, int fallback) {
        return static_cast<int>(count(key, static_cast<std::uint64_t>(fallback)));
    }
    std::string text(const std::string& key, const std::string& fallback) {
        const json* v = find(key);
        if (!v) return fallback;
        if (!v->is_string()) throw ConfigError("key '" + sub(key) + "' must be a string");
        return v->get<std::string>();
    }
    Vec vector(const std::string& key) { return as_vector(get(key), sub(key)); }
    Mat matrix(const std::string& key) { return as_matrix(get(key), sub(key)); }
    std::vector<double> list(const std::string& key, std::vector<double> fallback) {
        const json* v = find(key);
        if (!v) return fallback;
        const Vec x = as_vector(*v, sub(key));
        return {x.data(), x.data() + x.size()};
    }
    Section child(const std::string& key) { return Section(get(key), sub(key)); }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!used_.count(it.key())) throw ConfigError("unknown key '" + sub(it.key()) + "'");
    }

    std::string sub(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    static double as_number(const json& v, const std::string& path) {
        if (!v.is_number()) throw ConfigError("key '" + path + "' must be a number");
        return v.get<double>();
    }
    static Vec as_vector(const json& v, const std::string& path) {
        if (v.is_number()) return Vec::Constant(1, v.get<double>());
        if (!v.is_array()) throw ConfigError("key '" + path + "' must be a list of numbers");
        Vec x(static_cast<Eigen::Index>(v.size()));
        for (std::size_t i = 0; i < v.size(); ++i)
            x[static_cast<Eigen::Index>(i)] = as_number(v[i], path + "[" + std::to_string(i) + "]");
        return x;
    }
    static Mat as_matrix(const json& v, const std::string& path) {
        if (v.is_number()) return Mat::Constant(1, 1, v.get<double>());
        if (!v.is_array() || v.empty()) throw ConfigError("key '" + path + "' must be a matrix");
        const std::size_t rows = v.size();
        if (!v[0].is_array()) throw ConfigError("key '" + path + "' must be a list of rows");
        const std::size_t cols = v[0].size();
        Mat m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        for (std::size_t i = 0; i < rows; ++i) {
            if (!v[i].is_array() || v[i].size() != cols)
                throw ConfigError("key '" + path + "' has ragged rows");
            for (std::size_t k = 0; k < cols; ++k)
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                    as_number(v[i][k], path + "[" + std::to_string(i) + "][" + std::to_string(k) + "]");
        }
        return m;
    }

private:
    std::string where() const { return path_.empty() ? "document" : "'" + path_ + "'"; }

    const json& j_;
    std::string path_;
    std::set<std::string> used_;
};

std::vector<mm::Side> sides(const std::string& s, const std::string& path) {
    if (s == "bid") return {mm::Side::Bid};
    if (s == "ask") return {mm::Side::Ask};
    if (s == "both") return {mm::Side::Bid, mm::Side::Ask};
    throw ConfigError("key '" + path + "' must be bid, ask or both");
}

struct Keyed {
    int asset;
    int tier;
    mm::Side side;
};

mm::MultiOUMarket parse_market(Section s) {
    mm::MultiOUMarket m;
    m.r = s.integer("assets", 0);
    m.S0 = s.vector("S0");
    m.d = static_cast<int>(m.S0.size());
    const json* sbar = s.find("Sbar");
    m.Sbar = sbar ? Section::as_vector(*sbar, s.sub("Sbar")) : m.S0;
    m.R = s.matrix("R");
    m.V = s.matrix("V");
    s.finish();
    if (m.r <= 0) throw ConfigError("key 'market.assets' must be positive");
    m.validate();
    return m;
}

std::vector<std::pair<Keyed, mm::IntensityModel>> parse_intensities(const json& j) {
    if (!j.is_array()) throw ConfigError("key 'intensities' must be a list");
    std::vector<std::pair<Keyed, mm::IntensityModel>> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        Section s(j[i], "intensities[" + std::to_string(i) + "]");
        const int asset = s.integer("asset", 0), tier = s.integer("tier", 0);
        const std::string kind = s.text("kind", "logistic");
        mm::IntensityModel m;
        if (kind == "logistic") {
            m = mm::IntensityModel::logistic(s.number("lambda_base"), s.number("a"), s.number("b"));
        } else if (kind == "exponential") {
            m = mm::IntensityModel::exponential(s.number("A"), s.number("k"));
        } else {
            throw ConfigError("key '" + s.sub("kind") + "' must be logistic or exponential");
        }
        for (mm::Side side : sides(s.text("side", "both"), s.sub("side")))
            out.push_back({{asset, tier, side}, m});
        s.finish();
    }
    return out;
}

std::vector<std::pair<Keyed, mm::SizeDistribution>> parse_sizes(const json& j) {
    if (!j.is_array()) throw ConfigError("key 'sizes' must be a list");
    std::vector<std::pair<Keyed, mm::SizeDistribution>> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        Section s(j[i], "sizes[" + std::to_string(i) + "]");
        const int asset = s.integer("asset", 0), tier = s.integer("tier", 0);
        mm::SizeDistribution dist;
        if (const json* g = s.find("gamma")) {
            Section gs(*g, s.sub("gamma"));
            dist = mm::discretize_gamma(gs.number("alpha"), gs.number("beta"), gs.number("bin_width"),
                                        gs.integer("n_bins", 10));
            gs.finish();
            if (s.find("points")) throw ConfigError("'" + s.sub("gamma") + "' and 'points' are exclusive");
        } else if (const json* p = s.find("points")) {
            const Mat m = Section::as_matrix(*p, s.sub("points"));
            if (m.cols() != 2) throw ConfigError("key '" + s.sub("points") + "' rows must be [z, w]");
            for (Eigen::Index k = 0; k < m.rows(); ++k) {
                dist.z.push_back(m(k, 0));
                dist.w.push_back(m(k, 1));
            }
        } else {
            throw ConfigError("'" + s.sub("") + "' needs 'gamma' or 'points'");
        }
        for (mm::Side side : sides(s.text("side", "both"), s.sub("side")))
            out.push_back({{asset, tier, side}, dist});
        s.finish();
    }
    return out;
}

RiskSection parse_risk(Section s) {
    RiskSection r;
    r.rho = s.number("rho");
    r.Gamma = s.matrix("Gamma");
    if (const json* e = s.find("eta")) r.eta = Section::as_matrix(*e, s.sub("eta"));
    r.T = s.number("T");
    r.cap = s.number("cap", 600.0);
    s.finish();
    return r;
}

leqg::Problem parse_leqg(Section s) {
    leqg::Problem p;
    const Mat A = s.matrix("A"), B = s.matrix("B"), C = s.matrix("C"), R = s.matrix("R"),
              V = s.matrix("V");
    p.r = static_cast<int>(A.rows());
    p.d = static_cast<int>(C.rows());
    p.A = constant(A);
    p.B = constant(B);
    p.C = constant(C);
    p.R = constant(R);
    p.V = constant(V);
    p.rho = s.number("rho");
    p.T = s.number("T");
    p.Psi = s.matrix("Psi");
    p.Upsilon = s.matrix("Upsilon");
    p.Gamma = s.matrix("Gamma");
    p.x0 = s.vector("x0");
    p.y0 = s.vector("y0");
    p.z0 = s.number("z0", 0.0);
    s.finish();
    const double times[] = {0.0, p.T};
    p.validate(times);
    return p;
}

ExecutionSection parse_execution(Section s) {
    ExecutionSection e;
    e.S0 = s.vector("S0");
    e.V = s.matrix("V");
    e.b0 = s.vector("b0");
    e.Pi0 = s.matrix("Pi0");
    const json* mu = s.find("true_mu");
    e.true_mu = mu ? Section::as_vector(*mu, s.sub("true_mu")) : e.b0;
    e.q0 = s.vector("q0");
    e.X0 = s.number("X0", 0.0);
    s.finish();
    if (e.V.rows() != e.S0.size() || e.b0.size() != e.S0.size() || e.true_mu.size() != e.S0.size())
        throw DimensionError("execution vectors must match S0");
    return e;
}

}  // namespace

SolverOptions SolverSection::options() const {
    SolverOptions o;
    o.scheme = scheme;
    o.norm_cap = norm_cap;
    return o;
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

const mm::MMConfig& Scenario::market_making() const {
    if (!mm) throw ConfigError("scenario has no market-making section");
    return *mm;
}

exec::DriftPosterior Scenario::posterior() const {
    if (!execution) throw ConfigError("scenario has no execution section");
    const ExecutionSection& e = *execution;
    return exec::DriftPosterior({e.b0, e.Pi0}, e.V * e.V.transpose(), e.S0);
}

exec::ExecConfig Scenario::exec_config() const {
    if (!execution || !risk) throw ConfigError("execution needs 'execution' and 'risk' sections");
    if (!risk->eta) throw ConfigError("execution needs 'risk.eta'");
    exec::ExecConfig c;
    c.r = static_cast<int>(execution->q0.size());
    c.rho = risk->rho;
    c.eta = *risk->eta;
    c.Gamma = risk->Gamma;
    c.T = risk->T;
    c.q0 = execution->q0;
    c.X0 = execution->X0;
    c.validate(static_cast<int>(execution->S0.size()));
    return c;
}

const leqg::Problem& Scenario::leqg_problem() const {
    if (!leqg) throw ConfigError("scenario has no leqg section");
    return *leqg;
}

Scenario parse_scenario(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    Section root(doc, "");
    Scenario sc;
    sc.hash = fnv1a_hex(doc.dump());
    const double version = root.number("schema_version");
    if (version != kSchemaVersion)
        throw ConfigError("unsupported schema_version " + std::to_string(version));

    const std::string problem = root.text("problem", "mm");
    if (problem == "mm") sc.problem = ProblemKind::MarketMaking;
    else if (problem == "exec") sc.problem = ProblemKind::Execution;
    else if (problem == "leqg") sc.problem = ProblemKind::Leqg;
    else throw ConfigError("key 'problem' must be mm, exec or leqg");

    if (const json* r = root.find("risk")) sc.risk = parse_risk(Section(*r, "risk"));

    if (const json* m = root.find("market")) {
        if (!sc.risk) throw ConfigError("market making needs a 'risk' section");
        mm::MMConfig c;
        c.market = parse_market(Section(*m, "market"));
        const json* ij = root.find("intensities");
        const json* sj = root.find("sizes");
        const auto intensities = ij ? parse_intensities(*ij) : decltype(parse_intensities(json::array())){};
        const auto sizes = sj ? parse_sizes(*sj) : decltype(parse_sizes(json::array())){};
        for (const auto& [key, model] : intensities) {
            const mm::SizeDistribution* dist = nullptr;
            for (const auto& [k2, d] : sizes)
                if (k2.asset == key.asset && k2.tier == key.tier && k2.side == key.side) dist = &d;
            if (!dist)
                throw ConfigError("missing sizes for asset " + std::to_string(key.asset) + ", tier " +
                                  std::to_string(key.tier) + ", " + mm::side_name(key.side));
            c.flows.push_back({key.asset, key.tier, key.side, model, *dist});
        }
        for (const auto& [key, d] : sizes) {
            bool found = false;
            for (const auto& [k2, m2] : intensities)
                found = found || (k2.asset == key.asset && k2.tier == key.tier && k2.side == key.side);
            if (!found)
                throw ConfigError("missing intensity for asset " + std::to_string(key.asset) +
                                  ", tier " + std::to_string(key.tier) + ", " + mm::side_name(key.side));
        }
        c.rho = sc.risk->rho;
        c.Gamma = sc.risk->Gamma;
        c.eta = sc.risk->eta;
        c.T = sc.risk->T;
        c.inventory_cap = sc.risk->cap;
        c.validate();
        sc.mm = std::move(c);
    } else if (root.find("intensities") || root.find("sizes")) {
        throw ConfigError("'intensities' and 'sizes' need a 'market' section");
    }

    if (const json* e = root.find("execution")) sc.execution = parse_execution(Section(*e, "execution"));
    if (const json* l = root.find("leqg")) sc.leqg = parse_leqg(Section(*l, "leqg"));

    if (const json* s = root.find("solver")) {
        Section ss(*s, "solver");
        const std::string scheme = ss.text("scheme", "rk4");
        if (scheme == "rk4") sc.solver.scheme = Scheme::ExplicitRK4;
        else if (scheme == "implicit-euler") sc.solver.scheme = Scheme::ImplicitEuler;
        else throw ConfigError("key 'solver.scheme' must be rk4 or implicit-euler");
        sc.solver.dt = ss.number("dt", sc.solver.dt);
        sc.solver.norm_cap = ss.number("norm_cap", sc.solver.norm_cap);
        ss.finish();
        if (!(sc.solver.dt > 0) || !(sc.solver.norm_cap > 0))
            throw ConfigError("solver dt and norm_cap must be positive");
    }
    if (const json* g = root.find("grid")) {
        Section gs(*g, "grid");
        mm::HJBGridSpec& spec = sc.grid;
        spec.dt = gs.number("dt", spec.dt);
        spec.dq = gs.number("dq", spec.dq);
        spec.dS = gs.number("dS", spec.dS);
        spec.S_span_sd = gs.number("S_span_sd", spec.S_span_sd);
        spec.p_lo = gs.number("p_lo", spec.p_lo);
        spec.p_hi = gs.number("p_hi", spec.p_hi);
        spec.p_step = gs.number("p_step", spec.p_step);
        gs.finish();
    }
    if (const json* s = root.find("simulation")) {
        Section ss(*s, "simulation");
        SimulationSection& sim = sc.simulation;
        sim.dt = ss.number("dt", sim.dt);
        sim.n_paths = ss.count("n_paths", sim.n_paths);
        sim.seed = ss.count("seed", sim.seed);
        sim.recorded_paths = ss.count("recorded_paths", sim.recorded_paths);
        sim.record_stride = ss.count("record_stride", sim.record_stride);
        ss.finish();
        if (!(sim.dt > 0)) throw ConfigError("key 'simulation.dt' must be positive");
    }
    if (const json* s = root.find("sweep")) {
        Section ss(*s, "sweep");
        SweepSection& sw = sc.sweep;
        sw.t = ss.list("t", sw.t);
        sw.q = ss.list("q", {});
        sw.S = ss.list("S", {});
        sw.z = ss.list("z", {});
        sw.asset = ss.integer("asset", 0);
        sw.tier = ss.integer("tier", 0);
        ss.finish();
    }
    if (const json* o = root.find("output")) {
        Section os(*o, "output");
        sc.output_dir = os.text("directory", ".");
        os.finish();
    }
    root.finish();

    switch (sc.problem) {
        case ProblemKind::MarketMaking:
            if (!sc.mm) throw ConfigError("problem 'mm' needs a 'market' section");
            break;
        case ProblemKind::Execution:
            sc.exec_config();
            break;
        case ProblemKind::Leqg:
            if (!sc.leqg) throw ConfigError("problem 'leqg' needs a 'leqg' section");
            break;
    }
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

}  // namespace rmm::io
