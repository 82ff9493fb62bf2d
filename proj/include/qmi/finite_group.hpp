#pragma once

#include <istream>
#include <vector>

#include "qmi/operator_core.hpp"
#include "qmi/superop.hpp"

namespace qmi {

// Finite group given by its multiplication table. Counting measure is
// bi-invariant, so every group-algebra identity holds exactly here.
class FiniteGroup {
public:
    static FiniteGroup z2();
    static FiniteGroup s3();
    static FiniteGroup q8();

    // Plain-text table: first line n, then n lines of n indices.
    static FiniteGroup from_table(std::istream& in);
    static FiniteGroup from_table(std::vector<std::vector<int>> table);

    int order() const { return n_; }
    int mul(int a, int b) const { return table_[a][b]; }
    int inv(int a) const { return inverse_[a]; }
    int identity() const { return identity_; }

private:
    explicit FiniteGroup(std::vector<std::vector<int>> table);
    void validate() const;  // identity, inverses, associativity (exhaustive)

    int n_;
    std::vector<std::vector<int>> table_;
    std::vector<int> inverse_;
    int identity_;
};

// Complex-valued function on a finite group.
struct GroupAlgebraElement {
    const FiniteGroup* group = nullptr;
    CVec coeffs;
};

GroupAlgebraElement delta_at(const FiniteGroup& g, int element);
GroupAlgebraElement uniform_element(const FiniteGroup& g);
GroupAlgebraElement random_element(const FiniteGroup& g, Rng& rng);

// (g*f)(z) = sum_y g(y) f(y^-1 z)
GroupAlgebraElement convolve_fg(const GroupAlgebraElement& g,
                                const GroupAlgebraElement& f);

// Permutation matrix of f -> f(a^-1 .), acting on coefficient vectors.
Eigen::MatrixXd left_translation_matrix(const FiniteGroup& g, int a);

// Adjoint for the counting-measure inner product.
Eigen::MatrixXd kolmogorov_adjoint(const Eigen::MatrixXd& m);
Eigen::MatrixXcd kolmogorov_adjoint(const Eigen::MatrixXcd& m);

// fZ_f = sum_y f(y) L_y
Eigen::MatrixXcd left_convolution_ultraop(const GroupAlgebraElement& f);

// f(x) -> conj(f(x^-1))
GroupAlgebraElement gelfand(const GroupAlgebraElement& f);

// f(x) -> conj(f(dagger(x))); dagger_map must be an involution on indices.
GroupAlgebraElement cartan(const GroupAlgebraElement& f,
                           const std::vector<int>& dagger_map);

// x -> x^-1; for unitary representations the Cartan and Gelfand involutions
// coincide through this map.
std::vector<int> inverse_dagger_map(const FiniteGroup& g);

using GroupRep = std::vector<Mat>;

GroupRep z2_sign_rep();
GroupRep s3_irrep_2d();
GroupRep q8_irrep_2d();

// Exhaustive K_x K_y = K_{xy} check; throws on failure.
void validate_rep(const FiniteGroup& g, const GroupRep& rep, double tol = 1e-12);

// Z_f = sum_x conj(f(x)) K_x (.) K_x^dag
SuperOp iga_superop_rep(const GroupAlgebraElement& f, const FiniteGroup& g,
                        const GroupRep& rep);

}  // namespace qmi
