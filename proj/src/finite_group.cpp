#include "qmi/finite_group.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace qmi {

FiniteGroup::FiniteGroup(std::vector<std::vector<int>> table)
    : n_(static_cast<int>(table.size())), table_(std::move(table)), identity_(-1) {
    if (n_ < 1) throw std::invalid_argument("FiniteGroup: empty table");
    for (const auto& row : table_) {
        if (static_cast<int>(row.size()) != n_)
            throw std::invalid_argument("FiniteGroup: table is not square");
        for (int v : row)
            if (v < 0 || v >= n_)
                throw std::invalid_argument("FiniteGroup: index out of range");
    }
    for (int c = 0; c < n_ && identity_ < 0; ++c) {
        bool ok = true;
        for (int a = 0; a < n_; ++a)
            ok = ok && table_[c][a] == a && table_[a][c] == a;
        if (ok) identity_ = c;
    }
    if (identity_ < 0) throw std::invalid_argument("FiniteGroup: no identity element");
    validate();
    inverse_.assign(n_, -1);
    for (int a = 0; a < n_; ++a)
        for (int b = 0; b < n_; ++b)
            if (table_[a][b] == identity_ && table_[b][a] == identity_)
                inverse_[a] = b;
}

void FiniteGroup::validate() const {
    for (int a = 0; a < n_; ++a) {
        bool found = false;
        for (int b = 0; b < n_; ++b)
            if (table_[a][b] == identity_ && table_[b][a] == identity_) found = true;
        if (!found) throw std::invalid_argument("FiniteGroup: missing inverse");
    }
    // associativity, exhaustive
    for (int a = 0; a < n_; ++a)
        for (int b = 0; b < n_; ++b)
            for (int c = 0; c < n_; ++c)
                if (table_[table_[a][b]][c] != table_[a][table_[b][c]])
                    throw std::invalid_argument("FiniteGroup: not associative");
}

FiniteGroup FiniteGroup::from_table(std::vector<std::vector<int>> table) {
    return FiniteGroup(std::move(table));
}

FiniteGroup FiniteGroup::from_table(std::istream& in) {
    int n = 0;
    if (!(in >> n) || n < 1)
        throw std::invalid_argument("FiniteGroup::from_table: bad order");
    std::vector<std::vector<int>> table(n, std::vector<int>(n));
    for (auto& row : table)
        for (int& v : row)
            if (!(in >> v))
                throw std::invalid_argument("FiniteGroup::from_table: short table");
    return FiniteGroup(std::move(table));
}

FiniteGroup FiniteGroup::z2() { return FiniteGroup({{0, 1}, {1, 0}}); }

namespace {

// permutations of {0,1,2} in lexicographic order; element 0 is the identity
constexpr std::array<std::array<int, 3>, 6> kS3Perms = {{
    {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0},
}};

int s3_index(const std::array<int, 3>& p) {
    for (int i = 0; i < 6; ++i)
        if (kS3Perms[i] == p) return i;
    throw std::logic_error("s3_index: not a permutation");
}

// quaternion units as (axis, sign): index = 2*axis + (sign < 0), axes
// 0 -> 1, 1 -> i, 2 -> j, 3 -> k
int q8_mul(int x, int y) {
    const int ax = x / 2, sx = x % 2;
    const int ay = y / 2, sy = y % 2;
    int sign = sx ^ sy;
    int axis;
    if (ax == 0) {
        axis = ay;
    } else if (ay == 0) {
        axis = ax;
    } else if (ax == ay) {
        axis = 0;
        sign ^= 1;  // i*i = j*j = k*k = -1
    } else {
        axis = 6 - ax - ay;
        const bool cyclic = (ay == ax % 3 + 1);  // (1,2), (2,3), (3,1)
        if (!cyclic) sign ^= 1;
    }
    return 2 * axis + sign;
}

}  // namespace

FiniteGroup FiniteGroup::s3() {
    std::vector<std::vector<int>> table(6, std::vector<int>(6));
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) {
            std::array<int, 3> comp;
            for (int i = 0; i < 3; ++i) comp[i] = kS3Perms[a][kS3Perms[b][i]];
            table[a][b] = s3_index(comp);
        }
    return FiniteGroup(std::move(table));
}

FiniteGroup FiniteGroup::q8() {
    std::vector<std::vector<int>> table(8, std::vector<int>(8));
    for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b) table[a][b] = q8_mul(a, b);
    return FiniteGroup(std::move(table));
}

GroupAlgebraElement delta_at(const FiniteGroup& g, int element) {
    GroupAlgebraElement f{&g, CVec::Zero(g.order())};
    f.coeffs(element) = 1.0;
    return f;
}

GroupAlgebraElement uniform_element(const FiniteGroup& g) {
    GroupAlgebraElement f{&g, CVec::Constant(g.order(), 1.0 / g.order())};
    return f;
}

GroupAlgebraElement random_element(const FiniteGroup& g, Rng& rng) {
    GroupAlgebraElement f{&g, CVec(g.order())};
    for (int i = 0; i < g.order(); ++i)
        f.coeffs(i) = Cplx(rng.gaussian(), rng.gaussian());
    return f;
}

GroupAlgebraElement convolve_fg(const GroupAlgebraElement& g,
                                const GroupAlgebraElement& f) {
    if (g.group != f.group)
        throw std::invalid_argument("convolve_fg: group mismatch");
    const FiniteGroup& grp = *g.group;
    GroupAlgebraElement out{&grp, CVec::Zero(grp.order())};
    for (int z = 0; z < grp.order(); ++z)
        for (int y = 0; y < grp.order(); ++y)
            out.coeffs(z) += g.coeffs(y) * f.coeffs(grp.mul(grp.inv(y), z));
    return out;
}

Eigen::MatrixXd left_translation_matrix(const FiniteGroup& g, int a) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(g.order(), g.order());
    const int ainv = g.inv(a);
    for (int x = 0; x < g.order(); ++x) m(x, g.mul(ainv, x)) = 1.0;
    return m;
}

Eigen::MatrixXd kolmogorov_adjoint(const Eigen::MatrixXd& m) { return m.transpose(); }

Eigen::MatrixXcd kolmogorov_adjoint(const Eigen::MatrixXcd& m) { return m.adjoint(); }

Eigen::MatrixXcd left_convolution_ultraop(const GroupAlgebraElement& f) {
    const FiniteGroup& g = *f.group;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(g.order(), g.order());
    for (int y = 0; y < g.order(); ++y)
        m += f.coeffs(y) * left_translation_matrix(g, y);
    return m;
}

GroupAlgebraElement gelfand(const GroupAlgebraElement& f) {
    const FiniteGroup& g = *f.group;
    GroupAlgebraElement out{&g, CVec(g.order())};
    for (int x = 0; x < g.order(); ++x)
        out.coeffs(x) = std::conj(f.coeffs(g.inv(x)));
    return out;
}

GroupAlgebraElement cartan(const GroupAlgebraElement& f,
                           const std::vector<int>& dagger_map) {
    const FiniteGroup& g = *f.group;
    if (static_cast<int>(dagger_map.size()) != g.order())
        throw std::invalid_argument("cartan: dagger map size mismatch");
    for (int x = 0; x < g.order(); ++x)
        if (dagger_map[dagger_map[x]] != x)
            throw std::invalid_argument("cartan: dagger map is not involutive");
    GroupAlgebraElement out{&g, CVec(g.order())};
    for (int x = 0; x < g.order(); ++x)
        out.coeffs(x) = std::conj(f.coeffs(dagger_map[x]));
    return out;
}

std::vector<int> inverse_dagger_map(const FiniteGroup& g) {
    std::vector<int> m(g.order());
    for (int x = 0; x < g.order(); ++x) m[x] = g.inv(x);
    return m;
}

GroupRep z2_sign_rep() {
    Mat p(1, 1), m(1, 1);
    p << 1.0;
    m << -1.0;
    return {p, m};
}

GroupRep s3_irrep_2d() {
    // restriction of the permutation action to the plane orthogonal to (1,1,1)
    const double b1[3] = {1 / std::sqrt(2.0), -1 / std::sqrt(2.0), 0};
    const double b2[3] = {1 / std::sqrt(6.0), 1 / std::sqrt(6.0), -2 / std::sqrt(6.0)};
    GroupRep rep;
    for (const auto& p : kS3Perms) {
        Mat m(2, 2);
        const double* basis[2] = {b1, b2};
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) {
                double acc = 0.0;
                for (int i = 0; i < 3; ++i) acc += basis[r][p[i]] * basis[c][i];
                m(r, c) = acc;
            }
        rep.push_back(m);
    }
    return rep;
}

GroupRep q8_irrep_2d() {
    const Mat id = Mat::Identity(2, 2);
    const Mat qi = kI * pauli_z();
    const Mat qj = kI * pauli_y();
    const Mat qk = kI * pauli_x();
    return {id, -id, qi, -qi, qj, -qj, qk, -qk};
}

void validate_rep(const FiniteGroup& g, const GroupRep& rep, double tol) {
    if (static_cast<int>(rep.size()) != g.order())
        throw std::invalid_argument("validate_rep: size mismatch");
    for (int x = 0; x < g.order(); ++x)
        for (int y = 0; y < g.order(); ++y)
            if ((rep[x] * rep[y] - rep[g.mul(x, y)]).norm() > tol)
                throw std::invalid_argument("validate_rep: not a homomorphism");
}

SuperOp iga_superop_rep(const GroupAlgebraElement& f, const FiniteGroup& g,
                        const GroupRep& rep) {
    validate_rep(g, rep);
    const int d = static_cast<int>(rep.front().rows());
    SuperOp z = SuperOp::zero(d);
    for (int x = 0; x < g.order(); ++x)
        z += sandwich(rep[x], rep[x]) * std::conj(f.coeffs(x));
    return z;
}

}  // namespace qmi
