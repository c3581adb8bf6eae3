#pragma once

#include "fpres/rational.hpp"

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

namespace fpres {

// Modular data of a rational CFT. Either dense (explicit S) or a lazy
// tensor product of dense factors; field ids of a product are mixed radix
// with the first factor most significant.
class ModularData {
public:
    static std::shared_ptr<const ModularData> dense(std::vector<std::string> labels, std::vector<Rational> h,
                                                    Rational c, Eigen::MatrixXcd S, std::vector<int> conj);
    static std::shared_ptr<const ModularData> product(std::vector<std::shared_ptr<const ModularData>> factors);

    int size() const { return static_cast<int>(h_.size()); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<Rational>& h() const { return h_; }
    Rational h(int a) const { return h_[a]; }
    Rational c() const { return c_; }
    const std::vector<int>& conjugation() const { return conj_; }
    int conj(int a) const { return conj_[a]; }

    cplx s(int a, int b) const;
    bool is_product() const { return !factors_.empty(); }
    const std::vector<std::shared_ptr<const ModularData>>& factors() const { return factors_; }
    std::vector<int> split(int a) const;
    int join(const std::vector<int>& parts) const;

    // Explicit S; throws resource-limit above max_fields.
    Eigen::MatrixXcd dense_S(int max_fields = 4096) const;
    const Eigen::MatrixXcd& S() const;  // dense storage only

    int find(const std::string& label) const;  // -1 if absent

private:
    std::vector<std::string> labels_;
    std::vector<Rational> h_;
    Rational c_;
    Eigen::MatrixXcd S_;
    std::vector<int> conj_;
    std::vector<std::shared_ptr<const ModularData>> factors_;
    std::vector<int> strides_;
    std::unordered_map<std::string, int> by_label_;
};

using MDPtr = std::shared_ptr<const ModularData>;

cplx t_phase(const ModularData& md, int a);
Rational t_turns(const ModularData& md, int a);

struct ModularCheck {
    double unitarity = 0, symmetry = 0, st_cubed = 0, s_squared = 0, vacuum_row = 0;
    double max() const;
    bool passes(double tol = 1e-9) const { return max() < tol; }
};
ModularCheck check_modular(const ModularData& md);
ModularCheck check_modular(const Eigen::MatrixXcd& S, const std::vector<Rational>& h, Rational c,
                           const std::vector<int>& conj);

struct FusionTensor {
    int n = 0;
    std::vector<int> data;
    double max_residual = 0;
    double min_value = 0;
    int operator()(int a, int b, int c) const { return data[(static_cast<std::size_t>(a) * n + b) * n + c]; }
};

// Streams the matrices N_a (rows b, columns c) to visit; returns max
// residual and most negative entry.
struct FusionScan {
    double max_residual = 0;
    double min_value = 0;
    int rows_scanned = 0;
};
FusionScan verlinde_scan(const Eigen::MatrixXcd& S, const std::function<void(int, const Eigen::MatrixXd&)>& visit,
                         int max_rows = -1);

// Integrality and positivity of every N_ab^c without storing rows; uses N_ab^c = N_ba^c
// so row a only evaluates b >= a. max_rows limits the a range.
FusionScan fusion_integrality_scan(const Eigen::MatrixXcd& S, int max_rows = -1);

// Throws fusion-integrality-violation when residual > tol or an entry < -tol.
FusionTensor verlinde_fusion(const ModularData& md, double tol = 1e-6);

MDPtr tensor(const MDPtr& a, const MDPtr& b);

// Permutation C with S^2 = C; throws invalid-input if S^2 is not 0/1.
std::vector<int> conjugation_from_S(const Eigen::MatrixXcd& S, double tol = 1e-6);

// One-field theory with S = (1), h = 0, c = 0.
MDPtr trivial_theory();

}  // namespace fpres
