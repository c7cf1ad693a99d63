// Command-line front door: demos and machine-readable reports for the
// vector-measure, cross-norm and Hilbert-Schmidt construction library.
//
// Exit codes: 0 success, 2 usage error, 3 input error, 4 assertion failure.

#include <cstdint>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vmt/acceptance.hpp"
#include "vmt/half_average.hpp"
#include "vmt/hs_extension.hpp"
#include "vmt/khintchine.hpp"
#include "vmt/matrix_io.hpp"
#include "vmt/measures.hpp"
#include "vmt/report.hpp"
#include "vmt/tensor_norms.hpp"

namespace {

using namespace vmt;

struct GlobalOpts {
    uint64_t seed = 1;
    std::string format = "json";
    double tol = 1e-8;
    std::string out;
};

bool detect_orthogonal(const Eigen::MatrixXcd& atoms) {
    if (atoms.cols() > 256) return false;
    for (Eigen::Index i = 0; i < atoms.cols(); ++i)
        for (Eigen::Index j = i + 1; j < atoms.cols(); ++j)
            if (std::abs(atoms.col(i).dot(atoms.col(j))) > 1e-10) return false;
    return true;
}

/// Measure argument: rand:n:d[:seed] (n Gaussian atoms in C^d),
/// orth:n[:seed] (orthogonal atoms), or a file whose rows are atom vectors.
VectorMeasure parse_measure_arg(const std::string& arg, uint64_t seed) {
    const auto colon = arg.find(':');
    if (colon != std::string::npos) {
        const std::string kind = arg.substr(0, colon);
        const auto parts = vmt::detail::split(arg.substr(colon + 1), ':');
        if (kind == "rand" && (parts.size() == 2 || parts.size() == 3)) {
            const int n = vmt::detail::parse_dim(parts[0]);
            const int d = vmt::detail::parse_dim(parts[1]);
            Rng rng(parts.size() == 3 ? std::stoull(parts[2]) : seed);
            return VectorMeasure(FiniteAlgebra(n), rng.gaussian_cmatrix(d, n));
        }
        if (kind == "orth" && (parts.size() == 1 || parts.size() == 2)) {
            const int n = vmt::detail::parse_dim(parts[0]);
            Rng rng(parts.size() == 2 ? std::stoull(parts[1]) : seed);
            Eigen::VectorXd scales(n);
            for (int i = 0; i < n; ++i) scales[i] = 0.1 + rng.uniform();
            return VectorMeasure(FiniteAlgebra(n), rng.unitary(n) * scales.asDiagonal(), true);
        }
        throw std::invalid_argument("unknown measure shorthand: '" + arg + "'");
    }
    Eigen::MatrixXcd rows = read_matrix_file(arg);  // rows are atoms
    Eigen::MatrixXcd atoms = rows.transpose();
    const bool orth = detect_orthogonal(atoms);
    const auto n_atoms = static_cast<uint32_t>(atoms.cols());
    return VectorMeasure(FiniteAlgebra(n_atoms), std::move(atoms), orth);
}

/// Family argument for halfavg: rand:d:n[:seed] or a file of row vectors.
VectorFamily parse_family_arg(const std::string& arg, uint64_t seed) {
    const auto colon = arg.find(':');
    if (colon != std::string::npos) {
        const auto parts = vmt::detail::split(arg.substr(colon + 1), ':');
        if (arg.substr(0, colon) != "rand" || parts.size() < 2 || parts.size() > 3)
            throw std::invalid_argument("unknown family shorthand: '" + arg + "'");
        const int d = vmt::detail::parse_dim(parts[0]);
        const int n = vmt::detail::parse_dim(parts[1]);
        Rng rng(parts.size() == 3 ? std::stoull(parts[2]) : seed);
        return VectorFamily(d, rng.gaussian_matrix(d, n));
    }
    Eigen::MatrixXcd rows = read_matrix_file(arg);
    if (rows.imag().cwiseAbs().maxCoeff() != 0.0)
        throw std::invalid_argument("halfavg family must be real");
    Eigen::MatrixXd vs = rows.real().transpose();
    return VectorFamily(static_cast<int>(vs.rows()), vs);
}

AtomSet parse_set_arg(const std::string& arg, uint32_t n_atoms) {
    if (arg.empty() || arg == "all") return AtomSet::full(n_atoms);
    std::vector<uint32_t> idx;
    for (double v : parse_real_list(arg)) {
        if (v < 0 || v != std::floor(v)) throw std::invalid_argument("bad atom index list");
        idx.push_back(static_cast<uint32_t>(v));
    }
    return AtomSet(std::move(idx));
}

void emit(const Report& report, const GlobalOpts& g) {
    const std::string text = report.render(g.format);
    if (g.out.empty())
        std::cout << text;
    else
        write_file_atomic(g.out, text);
}

nlohmann::json base_inputs(const GlobalOpts& g) {
    nlohmann::json j;
    j["seed"] = g.seed;
    j["tol"] = g.tol;
    j["format"] = g.format;
    return j;
}

// ---------------------------------------------------------------------------
// subcommand runners
// ---------------------------------------------------------------------------

Report run_semivar(const GlobalOpts& g, const std::string& measure_arg,
                   const std::string& set_arg, const OptConfig& cfg) {
    Report rep;
    rep.command = "semivar";
    rep.inputs = base_inputs(g);
    rep.inputs["measure"] = measure_arg;
    rep.inputs["set"] = set_arg.empty() ? "all" : set_arg;
    const VectorMeasure phi = parse_measure_arg(measure_arg, g.seed);
    const AtomSet a = parse_set_arg(set_arg, phi.n_atoms());
    const auto res = semivariation(phi, a, cfg);
    const double set_norm = phi.value(a).norm();
    rep.outputs["n_atoms"] = phi.n_atoms();
    rep.outputs["dim"] = phi.dim();
    rep.outputs["value"] = res.value;
    rep.outputs["upper_hint"] = res.upper_hint();
    rep.outputs["exact"] = res.exact;
    rep.outputs["converged"] = res.converged;
    rep.outputs["iterations"] = res.iterations;
    rep.outputs["set_norm"] = set_norm;
    rep.outputs["orthogonal"] = phi.orthogonal();
    rep.check_le("set_norm_le_semivariation", set_norm, res.value, g.tol);
    if (phi.orthogonal())
        rep.check_close("orthogonal_semivariation_is_set_norm", res.value, set_norm, 1e-8);
    return rep;
}

Report run_pi_ratio(const GlobalOpts& g, const std::string& coeffs, int phases,
                    double require_ratio) {
    Report rep;
    rep.command = "pi-ratio";
    rep.inputs = base_inputs(g);
    Eigen::VectorXcd vals;
    if (phases > 0) {
        rep.inputs["phases"] = phases;
        vals.resize(phases);
        for (int k = 0; k < phases; ++k)
            vals[k] = std::polar(1.0, 2.0 * std::numbers::pi * k / phases);
    } else {
        rep.inputs["coeffs"] = coeffs;
        vals = parse_complex_list(coeffs);
    }
    ComplexMeasure lambda(FiniteAlgebra(static_cast<uint32_t>(vals.size())), vals);
    const AtomSet full = lambda.algebra().full();
    const double variation = lambda.variation(full);
    const double sup = full.size() <= 24 ? subset_sup_enumerated(lambda, full)
                                         : subset_sup(lambda, full);
    const double ratio = pi_ratio(lambda, full);
    rep.outputs["variation"] = variation;
    rep.outputs["subset_sup"] = sup;
    rep.outputs["ratio"] = ratio;
    rep.check_le("ratio_le_pi", ratio, std::numbers::pi, 1e-12);
    rep.check_ge("ratio_ge_one", ratio, 1.0, 1e-12);
    if (require_ratio > 0) rep.check_ge("ratio_ge_required", ratio, require_ratio, 0.0);
    return rep;
}

Report run_crossnorm(const GlobalOpts& g, const std::string& tensor_arg, const OptConfig& cfg) {
    Report rep;
    rep.command = "crossnorm";
    rep.inputs = base_inputs(g);
    rep.inputs["tensor"] = tensor_arg;
    TensorElement z(parse_matrix_arg(tensor_arg, g.seed));
    const double inj = injective_norm(z);
    const double proj = projective_norm(z);
    const auto l = l_norm_bounds(z, cfg);
    const auto r = r_norm_bounds(z, cfg);
    const auto m = m_norm_bounds(z, cfg);
    rep.outputs["m_rows"] = z.m();
    rep.outputs["n_cols"] = z.n();
    rep.outputs["injective"] = inj;
    rep.outputs["projective"] = proj;
    rep.outputs["hs_of_coeffs"] = hs_norm(z.coeffs());
    rep.outputs["l_lower"] = l.lower;
    rep.outputs["l_upper"] = l.upper;
    rep.outputs["r_lower"] = r.lower;
    rep.outputs["r_upper"] = r.upper;
    rep.outputs["m_lower"] = m.lower;
    rep.outputs["m_upper"] = m.upper;
    rep.outputs["converged"] = l.converged && r.converged;
    rep.check_le("injective_le_projective", inj, proj, 1e-10);
    const std::pair<const char*, NormInterval> intervals[] = {{"l", l}, {"r", r}, {"m", m}};
    for (const auto& [name, iv] : intervals) {
        rep.check_le(std::string(name) + "_lower_le_upper", iv.lower, iv.upper, 1e-10);
        rep.check_close(std::string(name) + "_lower_is_injective", iv.lower, inj, 1e-10);
        rep.check_le(std::string(name) + "_upper_le_projective", iv.upper, proj, 1e-8);
    }
    return rep;
}

Report run_psumming(const GlobalOpts& g, const std::string& matrix_arg,
                    const std::string& p_list, bool gaussian, int families, int max_size) {
    Report rep;
    rep.command = "psumming";
    rep.inputs = base_inputs(g);
    rep.inputs["matrix"] = matrix_arg;
    rep.inputs["p"] = p_list;
    rep.inputs["gaussian"] = gaussian;
    const Eigen::MatrixXcd t = parse_matrix_arg(matrix_arg, g.seed);
    const std::vector<double> ps = parse_real_list(p_list);
    FamilyConfig cfg;
    cfg.seed = g.seed;
    cfg.include_gaussian = gaussian;
    cfg.random_families = families;
    cfg.max_family_size = max_size;
    const double hs = hs_norm(t);
    rep.outputs["hs_norm"] = hs;
    nlohmann::json table = nlohmann::json::array();
    double prev = std::numeric_limits<double>::infinity();
    bool first = true;
    for (double p : ps) {
        const double bound = p_summing_lower_bound(t, p, cfg);
        nlohmann::json row;
        row["p"] = p;
        row["lower_bound"] = bound;
        table.push_back(row);
        if (p == 2.0) rep.check_close("p2_bound_equals_hs", bound, hs, 1e-8);
        if (!gaussian && !first)
            rep.check_le("non_increasing_at_p_" + vmt::accept::detail::fmt(p), bound, prev,
                         1e-10);
        prev = bound;
        first = false;
    }
    rep.outputs["bounds"] = table;
    return rep;
}

Report run_hs_construct(const GlobalOpts& g, const std::string& matrix_arg,
                        const std::string& variant_name) {
    Report rep;
    rep.command = "hs-construct";
    rep.inputs = base_inputs(g);
    rep.inputs["matrix"] = matrix_arg;
    rep.inputs["variant"] = variant_name;
    const Eigen::MatrixXcd t = parse_matrix_arg(matrix_arg, g.seed);
    const HsVariant variant =
        variant_name == "hadamard" ? HsVariant::RealHadamard : HsVariant::ComplexDft;

    // positive operators take the direct construction; anything else goes
    // through the polar transport
    bool polar = false;
    if (t.rows() != t.cols()) throw std::invalid_argument("hs-construct: square matrices only");
    if ((t - t.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
        polar = true;
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(t);
        polar = es.eigenvalues().minCoeff() < -1e-10;
    }
    const HSConstruction c =
        polar ? construct_hs_measures_general(t, variant) : construct_hs_measures(t, variant);
    const double hs = hs_norm(t);
    const double xi_norm = c.xi.value(c.xi.algebra().full()).norm();
    const double eta_norm = c.eta.value(c.eta.algebra().full()).norm();
    rep.outputs["achieved"] = c.achieved;
    rep.outputs["hs_norm"] = hs;
    rep.outputs["xi_total_norm"] = xi_norm;
    rep.outputs["eta_total_norm"] = eta_norm;
    rep.outputs["degenerate"] = c.degenerate;
    rep.outputs["polar_transport"] = polar;
    rep.check_close("achieved_equals_hs", c.achieved, hs, 1e-8 * (1.0 + hs));
    rep.check_close("xi_norm_is_one", xi_norm, 1.0, 1e-10);
    rep.check_close("eta_norm", eta_norm, c.degenerate ? 0.0 : 1.0, 1e-10);
    return rep;
}

Report run_hs_diverge(const GlobalOpts& g, int blocks, const std::string& eps_list,
                      const std::string& dims_list, int max_dim) {
    Report rep;
    rep.command = "hs-diverge";
    rep.inputs = base_inputs(g);
    rep.inputs["blocks"] = blocks;
    DivergenceSpec spec = DivergenceSpec::defaults(blocks);
    if (!eps_list.empty()) {
        const std::vector<double> eps = parse_real_list(eps_list);
        spec.eps = eps;
        spec.geometric_tail = false;
        spec.dims.clear();
        for (double e : eps)
            spec.dims.push_back(static_cast<int>(std::ceil(1.0 / std::pow(e, 4.0) - 1e-9)));
        rep.inputs["eps"] = eps_list;
    }
    if (!dims_list.empty()) {
        spec.dims.clear();
        for (double d : parse_real_list(dims_list)) spec.dims.push_back(static_cast<int>(d));
        rep.inputs["dims"] = dims_list;
    }
    spec.max_dim = max_dim;
    const auto w = divergence_witness(spec, blocks);
    nlohmann::json table = nlohmann::json::array();
    for (size_t n = 0; n < w.blocks.size(); ++n) {
        nlohmann::json row;
        row["dim"] = w.blocks[n].dim;
        row["eps"] = w.blocks[n].eps;
        row["achieved"] = w.blocks[n].achieved;
        row["partial_sum"] = w.partial_sums[n];
        table.push_back(row);
        rep.check_ge("block_" + std::to_string(n + 1) + "_achieved_ge_one",
                     w.blocks[n].achieved, 1.0, 1e-9);
        rep.check_ge("partial_sum_" + std::to_string(n + 1), w.partial_sums[n],
                     static_cast<double>(n + 1), 1e-9);
    }
    rep.outputs["blocks"] = table;
    rep.outputs["norm_sq_blocks"] = w.norm_sq_blocks;
    rep.outputs["tail_bound"] = w.tail_bound;
    rep.check_le("xi_norm_sq_lt_one", w.norm_sq_blocks + w.tail_bound * w.tail_bound, 1.0,
                 -1e-12);
    return rep;
}

Report run_spectral_demo(const GlobalOpts& g, int dim, const std::string& h_arg,
                         const std::string& t_arg, const std::string& times_arg, int num_times,
                         double t_max) {
    Report rep;
    rep.command = "spectral-demo";
    rep.inputs = base_inputs(g);
    rep.inputs["dim"] = dim;
    Rng rng(g.seed ^ 0x5decULL);
    Eigen::MatrixXcd h;
    if (h_arg.empty()) {
        h = rng.gaussian_cmatrix(dim, dim);
        h = 0.5 * (h + h.adjoint()).eval();
    } else {
        rep.inputs["hamiltonian"] = h_arg;
        h = parse_matrix_arg(h_arg, g.seed);
    }
    Eigen::MatrixXcd t = t_arg.empty()
                             ? rng.gaussian_cmatrix(static_cast<int>(h.rows()),
                                                    static_cast<int>(h.rows()))
                             : parse_matrix_arg(t_arg, g.seed);
    if (!t_arg.empty()) rep.inputs["matrix"] = t_arg;
    const Eigen::VectorXcd xi = rng.gaussian_cvector(static_cast<int>(h.rows()));
    const Eigen::VectorXcd eta = rng.gaussian_cvector(static_cast<int>(h.rows()));
    std::vector<double> times;
    if (!times_arg.empty()) {
        times = parse_real_list(times_arg);
        rep.inputs["times"] = times_arg;
    } else {
        for (int i = 1; i <= num_times; ++i) times.push_back(t_max * i / num_times);
        rep.inputs["num_times"] = num_times;
        rep.inputs["t_max"] = t_max;
    }
    const auto demo = spectral_demo(h, t, xi, eta, times);
    rep.outputs["max_discrepancy"] = demo.max_discrepancy;
    rep.outputs["product_total_variation"] = demo.product_total_variation;
    rep.outputs["times_checked"] = static_cast<int>(times.size());
    rep.check_le("evolution_matches_product_measure", demo.max_discrepancy, 1e-10, 0.0);
    return rep;
}

Report run_khintchine(const GlobalOpts& g, const std::string& p_list, const std::string& coeffs,
                      int cases, int n_max) {
    Report rep;
    rep.command = "khintchine";
    rep.inputs = base_inputs(g);
    rep.inputs["p"] = p_list;
    const std::vector<double> ps = parse_real_list(p_list);
    nlohmann::json table = nlohmann::json::array();

    auto process = [&](const SignSum& a, const std::string& label) {
        for (double p : ps) {
            nlohmann::json row;
            row["case"] = label;
            row["p"] = p;
            const double moment = exact_moment(a, p);
            row["moment"] = moment;
            if (p > 2.0) {
                const auto chk = check_upper_constant(a, p);
                row["bound_constant"] = chk.bound;
                row["empirical_ratio"] = chk.ratio;
                rep.check_flag("upper_constant_" + label + "_p" + vmt::accept::detail::fmt(p),
                               chk.passed);
            } else if (p < 2.0) {
                const auto chk = check_lower_constant(a, p);
                row["bound_constant"] = chk.bound;
                row["empirical_ratio"] = chk.ratio;
                rep.check_flag("lower_constant_" + label + "_p" + vmt::accept::detail::fmt(p),
                               chk.passed);
            } else {
                row["l2"] = a.l2();
                rep.check_close("second_moment_identity_" + label, moment, a.l2(), 1e-12);
            }
            table.push_back(row);
        }
    };

    if (!coeffs.empty()) {
        rep.inputs["coeffs"] = coeffs;
        process(SignSum(parse_complex_list(coeffs)), "given");
    } else {
        rep.inputs["cases"] = cases;
        rep.inputs["n_max"] = n_max;
        Rng rng(g.seed ^ 0x417ULL);
        bool tails_ok = true;
        for (int i = 0; i < cases; ++i) {
            const int n = 1 + static_cast<int>(rng.next_u64() % n_max);
            SignSum a = (i % 2 == 1) ? SignSum(rng.gaussian_cvector(n))
                                     : SignSum::real(rng.gaussian_vector(n));
            process(a, "case" + std::to_string(i));
            if (a.is_real()) {
                std::vector<double> grid;
                for (int gpt = 0; gpt <= 6; ++gpt) grid.push_back(0.5 * gpt * a.l2());
                tails_ok = tails_ok && tail_bound_check(a.coeffs.real(), grid).passed;
            }
        }
        rep.check_flag("tail_bounds_hold", tails_ok);
    }
    rep.outputs["table"] = table;
    const auto cosh_chk = elementary_inequality_check({0.0, 0.5, 1.0, 2.0, 5.0, 10.0});
    rep.check_flag("cosh_inequality", cosh_chk.passed);
    return rep;
}

Report run_halfavg(const GlobalOpts& g, const std::string& family_arg,
                   const std::string& cd_dims, int cd_samples) {
    Report rep;
    rep.command = "halfavg";
    rep.inputs = base_inputs(g);
    rep.inputs["family"] = family_arg;
    rep.inputs["cd_samples"] = cd_samples;
    const VectorFamily fam = parse_family_arg(family_arg, g.seed);
    HalfAverageConfig cfg;
    cfg.seed = g.seed;
    const auto res = half_average_subset(fam, cfg);
    rep.outputs["d"] = fam.d;
    rep.outputs["family_size"] = fam.size();
    rep.outputs["subset"] = res.subset;
    rep.outputs["ratio"] = res.ratio;
    rep.outputs["objective"] = res.g_value;
    rep.outputs["cd_closed_form"] = res.cd;
    rep.check_ge("ratio_ge_cd", res.ratio, res.cd, cfg.slack);

    nlohmann::json estimates = nlohmann::json::array();
    for (double dv : parse_real_list(cd_dims)) {
        const int d = static_cast<int>(dv);
        const auto est = estimate_cd(d, cd_samples, g.seed ^ (0xcd00ULL + d));
        nlohmann::json row;
        row["d"] = d;
        row["estimate"] = est.estimate;
        row["stderr"] = est.stderr_;
        row["closed_form"] = est.closed_form;
        estimates.push_back(row);
        rep.check_close("cd_estimate_d" + std::to_string(d), est.estimate, est.closed_form,
                        4 * est.stderr_);
    }
    rep.outputs["cd_estimates"] = estimates;
    return rep;
}

Report run_accept(const GlobalOpts& g, const OptConfig& probe_cfg) {
    Report rep;
    rep.command = "accept";
    rep.inputs = base_inputs(g);
    const auto results = vmt::accept::run_criteria(g.seed);
    nlohmann::json table = nlohmann::json::array();
    for (const auto& c : results) {
        nlohmann::json row;
        row["index"] = c.index;
        row["name"] = c.name;
        row["passed"] = c.passed;
        row["detail"] = c.detail;
        table.push_back(row);
        // wall times stay out of the report so that identical seeds give
        // identical bytes; the budget result is folded into the flag
        rep.check_flag("criterion_" + std::to_string(c.index), c.passed);
    }
    rep.outputs["criteria"] = table;

    // in-process determinism: the same seed renders the same bytes
    GlobalOpts probe = g;
    probe.out.clear();
    const std::string once = run_crossnorm(probe, "rand:4", probe_cfg).to_json_string();
    const std::string twice = run_crossnorm(probe, "rand:4", probe_cfg).to_json_string();
    rep.check_flag("seeded_rerun_is_identical", once == twice);
    return rep;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"vector measures, cross norms and Hilbert-Schmidt constructions"};
    app.require_subcommand(1);
    GlobalOpts g;
    app.add_option("--seed", g.seed, "seed for every randomized routine");
    app.add_option("--format", g.format, "report format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--tol", g.tol, "tolerance for generic report assertions");
    app.add_option("--out", g.out, "write the report to this path (atomically)");

    std::string measure_arg, set_arg, coeffs, tensor_arg, matrix_arg, p_list = "1,1.5,2,3,4";
    std::string variant = "dft", eps_list, dims_list, h_arg, t_arg, times_arg;
    std::string family_arg = "rand:3:20", cd_dims = "2,3";
    int phases = 0, blocks = 5, max_dim = 4096, dim = 5, num_times = 20;
    int cases = 50, n_max = 16, families = 24, max_size = 8, cd_samples = 200000;
    double require_ratio = 0, t_max = 10.0;
    bool gaussian = false;
    OptConfig opt;

    auto* semivar = app.add_subcommand("semivar", "semi-variation of a vector measure");
    semivar->add_option("--measure", measure_arg, "rand:n:d[:seed], orth:n[:seed], or file")
        ->required();
    semivar->add_option("--set", set_arg, "atom indices, e.g. 0,2,5 (default all)");
    semivar->add_option("--restarts", opt.restarts, "solver restarts");
    semivar->add_option("--max-iters", opt.max_iters, "ascent iteration cap");

    auto* piratio = app.add_subcommand("pi-ratio", "variation vs best subset modulus");
    piratio->add_option("--coeffs", coeffs, "comma-separated complex atom values");
    piratio->add_option("--phases", phases, "use n equispaced unit phases");
    piratio->add_option("--require-ratio", require_ratio, "assert ratio at least this value");

    auto* crossnorm = app.add_subcommand("crossnorm", "all five cross norms of a tensor");
    crossnorm->add_option("--tensor", tensor_arg, "coefficient matrix argument")->required();
    crossnorm->add_option("--restarts", opt.restarts, "inner solver restarts");

    auto* psumming = app.add_subcommand("psumming", "p-summing norm lower bounds");
    psumming->add_option("--matrix", matrix_arg, "operator matrix argument")->required();
    psumming->add_option("--p", p_list, "comma-separated exponents");
    psumming->add_flag("--gaussian", gaussian,
                       "add Gaussian families (disables the monotonicity assertions)");
    psumming->add_option("--families", families, "random family count");
    psumming->add_option("--max-size", max_size, "largest family size");

    auto* hscon = app.add_subcommand("hs-construct", "orthogonal measures achieving the HS norm");
    hscon->add_option("--matrix", matrix_arg, "operator matrix argument")->required();
    hscon->add_option("--variant", variant, "dft or hadamard")
        ->check(CLI::IsMember({"dft", "hadamard"}));

    auto* hsdiv = app.add_subcommand("hs-diverge", "divergence witness partial sums");
    hsdiv->add_option("--blocks", blocks, "number of blocks");
    hsdiv->add_option("--eps", eps_list, "block norms (default 2^{-(n+1)/2})");
    hsdiv->add_option("--dims", dims_list, "block dimensions (default smallest admissible)");
    hsdiv->add_option("--max-dim", max_dim, "refuse blocks larger than this");

    auto* sdemo = app.add_subcommand("spectral-demo", "product spectral measure identity");
    sdemo->add_option("--dim", dim, "dimension of the random instance");
    sdemo->add_option("--hamiltonian", h_arg, "hermitian matrix argument");
    sdemo->add_option("--matrix", t_arg, "observable matrix argument");
    sdemo->add_option("--times", times_arg, "comma-separated time points");
    sdemo->add_option("--num-times", num_times, "number of equispaced times");
    sdemo->add_option("--t-max", t_max, "largest time");

    auto* khin = app.add_subcommand("khintchine", "moment constants over a grid of p");
    khin->add_option("--p", p_list, "comma-separated exponents");
    khin->add_option("--coeffs", coeffs, "fixed coefficient sequence");
    khin->add_option("--cases", cases, "random corpus size when no coeffs given");
    khin->add_option("--n-max", n_max, "largest sequence length in the corpus");

    auto* halfavg = app.add_subcommand("halfavg", "half-average subset selection");
    halfavg->add_option("--family", family_arg, "rand:d:n[:seed] or file of row vectors");
    halfavg->add_option("--cd-dims", cd_dims, "dimensions for the C_d estimates");
    halfavg->add_option("--cd-samples", cd_samples, "Monte Carlo samples per estimate");

    app.add_subcommand("accept", "run the full acceptance suite");

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        opt.seed = g.seed;
        Report rep;
        if (semivar->parsed()) {
            rep = run_semivar(g, measure_arg, set_arg, opt);
        } else if (piratio->parsed()) {
            if (coeffs.empty() && phases <= 0)
                throw std::invalid_argument("pi-ratio needs --coeffs or --phases");
            rep = run_pi_ratio(g, coeffs, phases, require_ratio);
        } else if (crossnorm->parsed()) {
            rep = run_crossnorm(g, tensor_arg, opt);
        } else if (psumming->parsed()) {
            rep = run_psumming(g, matrix_arg, p_list, gaussian, families, max_size);
        } else if (hscon->parsed()) {
            rep = run_hs_construct(g, matrix_arg, variant);
        } else if (hsdiv->parsed()) {
            rep = run_hs_diverge(g, blocks, eps_list, dims_list, max_dim);
        } else if (sdemo->parsed()) {
            rep = run_spectral_demo(g, dim, h_arg, t_arg, times_arg, num_times, t_max);
        } else if (khin->parsed()) {
            rep = run_khintchine(g, p_list, coeffs, cases, n_max);
        } else if (halfavg->parsed()) {
            rep = run_halfavg(g, family_arg, cd_dims, cd_samples);
        } else {
            rep = run_accept(g, opt);
        }
        emit(rep, g);
        return rep.all_passed() ? 0 : 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 3;
    } catch (const std::out_of_range& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
