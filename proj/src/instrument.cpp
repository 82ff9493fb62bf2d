#include "qmi/instrument.hpp"

#include <json.hpp>

#include <cmath>
#include <stdexcept>

#include "qmi/gauss_hermite.hpp"

namespace qmi {

namespace {

void check_weak_regime(double kappa, double dt, Instrument& inst) {
    if (kappa <= 0 || dt <= 0)
        throw std::invalid_argument("weak instrument: kappa and dt must be positive");
    if (kappa * dt > kWeakRegimeMax)
        inst.warning = "kappa*dt = " + std::to_string(kappa * dt) +
                       " outside weak regime (<= " + std::to_string(kWeakRegimeMax) + ")";
}

Mat povm_sum(const Instrument& inst) {
    Mat s = Mat::Zero(inst.dim, inst.dim);
    for (const auto& atom : inst.atoms)
        s += atom.weight * (atom.kraus.adjoint() * atom.kraus);
    return s;
}

}  // namespace

Instrument identity_instrument(int dim) {
    Instrument inst;
    inst.dim = dim;
    inst.kind = InstrumentKind::discrete;
    inst.atoms.push_back({1.0, Mat::Identity(dim, dim)});
    return inst;
}

Instrument jump_weak(const Mat& l, double kappa, double dt) {
    Instrument inst;
    inst.dim = static_cast<int>(l.rows());
    inst.kind = InstrumentKind::discrete;
    check_weak_regime(kappa, dt, inst);
    const Mat k0 = mat_exp(Mat(-0.5 * kappa * dt * (l.adjoint() * l)));
    inst.atoms.push_back({1.0, k0});
    inst.atoms.push_back({kappa * dt, l});
    return inst;
}

Instrument diffusive_weak(const Mat& l, double kappa, double dt, int n_nodes,
                          double defect_tol) {
    if (n_nodes < 5)
        throw std::invalid_argument("diffusive_weak: n_nodes must be >= 5");
    Instrument inst;
    inst.dim = static_cast<int>(l.rows());
    inst.kind = InstrumentKind::quadrature;
    check_weak_regime(kappa, dt, inst);
    const auto rule = gauss_hermite(n_nodes);
    const Mat drift = -0.5 * kappa * dt * (l.adjoint() * l + l * l);
    for (int i = 0; i < n_nodes; ++i) {
        const double dw = std::sqrt(2.0 * dt) * rule.nodes[i];
        inst.atoms.push_back({rule.weights[i],
                              mat_exp(Mat(drift + std::sqrt(kappa) * dw * l))});
    }
    if (defect_tol > 0) {
        const double defect = completeness_defect(inst);
        if (defect > defect_tol)
            throw std::runtime_error(
                "diffusive_weak: completeness defect " + std::to_string(defect) +
                " exceeds requested tolerance; increase n_nodes");
    }
    return inst;
}

Instrument dmncos_weak(const std::vector<Mat>& ls, double kappa, double dt,
                       int n_nodes) {
    if (ls.empty()) throw std::invalid_argument("dmncos_weak: need Lindblad operators");
    if (ls.size() > 3)
        throw std::invalid_argument(
            "dmncos_weak: atom count n_nodes^len(ls) blows up combinatorially; "
            "at most 3 Lindblads supported");
    if (n_nodes < 5)
        throw std::invalid_argument("dmncos_weak: n_nodes must be >= 5");
    Instrument inst;
    inst.dim = static_cast<int>(ls.front().rows());
    inst.kind = InstrumentKind::quadrature;
    check_weak_regime(kappa, dt, inst);
    const auto rule = gauss_hermite(n_nodes);
    Mat drift = Mat::Zero(inst.dim, inst.dim);
    for (const Mat& l : ls) {
        if (l.rows() != inst.dim || l.cols() != inst.dim)
            throw std::invalid_argument("dmncos_weak: dimension mismatch");
        drift -= 0.5 * kappa * dt * (l.adjoint() * l + l * l);
    }
    const std::size_t n = ls.size();
    std::vector<int> idx(n, 0);
    while (true) {
        double w = 1.0;
        Mat gen = drift;
        for (std::size_t mu = 0; mu < n; ++mu) {
            w *= rule.weights[idx[mu]];
            const double dw = std::sqrt(2.0 * dt) * rule.nodes[idx[mu]];
            gen += std::sqrt(kappa) * dw * ls[mu];
        }
        inst.atoms.push_back({w, mat_exp(gen)});
        std::size_t mu = 0;
        while (mu < n && ++idx[mu] == n_nodes) idx[mu++] = 0;
        if (mu == n) break;
    }
    return inst;
}

Instrument convolve(const Instrument& later, const Instrument& earlier) {
    if (later.dim != earlier.dim)
        throw std::invalid_argument("convolve: dimension mismatch");
    const std::size_t count = later.atoms.size() * earlier.atoms.size();
    if (count > kAtomCap)
        throw std::runtime_error(
            "convolve: atom count " + std::to_string(count) +
            " exceeds cap; use trajectory sampling for long sequences");
    Instrument inst;
    inst.dim = later.dim;
    inst.kind = (later.kind == InstrumentKind::quadrature ||
                 earlier.kind == InstrumentKind::quadrature)
                    ? InstrumentKind::quadrature
                    : InstrumentKind::discrete;
    inst.atoms.reserve(count);
    for (const auto& a1 : later.atoms)
        for (const auto& a0 : earlier.atoms)
            inst.atoms.push_back({a1.weight * a0.weight, a1.kraus * a0.kraus});
    return inst;
}

Instrument repeat(const Instrument& inst, int n) {
    if (n < 0) throw std::invalid_argument("repeat: n must be >= 0");
    double count = 1.0;
    for (int i = 0; i < n; ++i) {
        count *= static_cast<double>(inst.atoms.size());
        if (count > static_cast<double>(kAtomCap))
            throw std::runtime_error(
                "repeat: atom count exceeds cap; use trajectory sampling");
    }
    Instrument out = identity_instrument(inst.dim);
    for (int i = 0; i < n; ++i) out = convolve(inst, out);
    return out;
}

SuperOp total_operation(const Instrument& inst) {
    SuperOp total = SuperOp::zero(inst.dim);
    for (const auto& atom : inst.atoms)
        total += sandwich(atom.kraus, atom.kraus) * atom.weight;
    return total;
}

double completeness_defect(const Instrument& inst) {
    return (povm_sum(inst) - Mat::Identity(inst.dim, inst.dim)).norm();
}

double born_probability(const Mat& rho, const Instrument& inst,
                        std::size_t atom_index) {
    if (atom_index >= inst.atoms.size())
        throw std::invalid_argument("born_probability: atom index out of range");
    const auto eigs = herm_eigvals(rho);
    if (eigs.front() < -1e-10)
        throw std::invalid_argument("born_probability: rho is not PSD");
    const double tr = rho.trace().real();
    if (tr <= 0) throw std::invalid_argument("born_probability: tr(rho) must be positive");
    const auto& atom = inst.atoms[atom_index];
    return atom.weight * (rho * atom.kraus.adjoint() * atom.kraus).trace().real() / tr;
}

std::string instrument_to_json(const Instrument& inst) {
    nlohmann::json j;
    j["dim"] = inst.dim;
    j["kind"] = inst.kind == InstrumentKind::discrete ? "discrete" : "quadrature";
    j["atoms"] = nlohmann::json::array();
    for (const auto& atom : inst.atoms) {
        nlohmann::json a;
        a["weight"] = atom.weight;
        std::vector<std::vector<double>> re(inst.dim, std::vector<double>(inst.dim));
        std::vector<std::vector<double>> im(inst.dim, std::vector<double>(inst.dim));
        for (int r = 0; r < inst.dim; ++r)
            for (int c = 0; c < inst.dim; ++c) {
                re[r][c] = atom.kraus(r, c).real();
                im[r][c] = atom.kraus(r, c).imag();
            }
        a["kraus_re"] = re;
        a["kraus_im"] = im;
        j["atoms"].push_back(std::move(a));
    }
    return j.dump();
}

Instrument instrument_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    Instrument inst;
    inst.dim = j.at("dim").get<int>();
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "discrete")
        inst.kind = InstrumentKind::discrete;
    else if (kind == "quadrature")
        inst.kind = InstrumentKind::quadrature;
    else
        throw std::invalid_argument("instrument_from_json: unknown kind '" + kind + "'");
    for (const auto& a : j.at("atoms")) {
        InstrumentAtom atom;
        atom.weight = a.at("weight").get<double>();
        if (atom.weight < 0)
            throw std::invalid_argument("instrument_from_json: negative weight");
        atom.kraus = Mat(inst.dim, inst.dim);
        const auto& re = a.at("kraus_re");
        const auto& im = a.at("kraus_im");
        for (int r = 0; r < inst.dim; ++r)
            for (int c = 0; c < inst.dim; ++c)
                atom.kraus(r, c) = Cplx(re.at(r).at(c).get<double>(),
                                        im.at(r).at(c).get<double>());
        inst.atoms.push_back(std::move(atom));
    }
    return inst;
}

}  // namespace qmi
