// Application fixtures: camera motion from five point matches (quaternion
// formulation) and cyclic-molecule conformation (half-angle formulation),
// with generators, ground-truth plumbing, and the motion error criterion.

#ifndef SPARSOLVE_FIXTURES_HPP
#define SPARSOLVE_FIXTURES_HPP

#include "sparsolve/polynomial.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sparsolve {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

namespace fixtures_detail {

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 matvec(const Mat3& m, const Vec3& v) {
    return {dot(m[0], v), dot(m[1], v), dot(m[2], v)};
}
inline Vec3 mat_tvec(const Mat3& m, const Vec3& v) {
    return {m[0][0] * v[0] + m[1][0] * v[1] + m[2][0] * v[2],
            m[0][1] * v[0] + m[1][1] * v[1] + m[2][1] * v[2],
            m[0][2] * v[0] + m[1][2] * v[1] + m[2][2] * v[2]};
}

// [w, x, y, z]; product is the right-handed Hamilton convention.
using Quat = std::array<double, 4>;

inline Quat qmul(const Quat& x, const Quat& y) {
    const Vec3 xv{x[1], x[2], x[3]}, yv{y[1], y[2], y[3]};
    const Vec3 c = cross(xv, yv);
    return {x[0] * y[0] - dot(xv, yv), x[0] * yv[0] + y[0] * xv[0] + c[0],
            x[0] * yv[1] + y[0] * xv[1] + c[1], x[0] * yv[2] + y[0] * xv[2] + c[2]};
}
inline Quat qconj(const Quat& x) { return {x[0], -x[1], -x[2], -x[3]}; }

inline Mat3 rotation_of(const Quat& q) {
    const double w = q[0], x = q[1], y = q[2], z = q[3];
    return {Vec3{1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)},
            Vec3{2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)},
            Vec3{2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)}};
}

// Exact dyadic rational equal to the double (doubles are rationals).
inline Rat exact_rational(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("exact_rational: non-finite value");
    if (v == 0.0) return Rat(0);
    int exp = 0;
    const double frac = std::frexp(v, &exp);  // v = frac * 2^exp, |frac| in [0.5, 1)
    const auto mant = static_cast<std::int64_t>(std::ldexp(frac, 53));
    exp -= 53;
    Rat r(mant);
    if (exp >= 0)
        r *= Rat(BigInt(1) << exp);
    else
        r /= Rat(BigInt(1) << -exp);
    return r;
}

}  // namespace fixtures_detail

// ---------------------------------------------------------------------------
// Camera motion from five point matches.

// Five image-point pairs (homogeneous 3-vectors in the two frames) plus the
// optional planted motion used as ground truth by tests: frame-2 rays are
// a' = R^T (X - t) for scene points X in frame 1.
struct MotionInstance {
    std::array<Vec3, 5> a;
    std::array<Vec3, 5> ap;
    bool has_truth = false;
    Mat3 rot{};   // orthonormal when has_truth
    Vec3 trans{};  // unit 2-norm when has_truth

    void require_truth() const {
        if (!has_truth) throw std::invalid_argument("motion instance has no planted truth");
        const Mat3& r = rot;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0.0;
                for (int k = 0; k < 3; ++k) s += r[k][i] * r[k][j];
                if (std::abs(s - (i == j ? 1.0 : 0.0)) > 1e-12)
                    throw std::invalid_argument("planted rotation is not orthonormal");
            }
        if (std::abs(fixtures_detail::norm(trans) - 1.0) > 1e-12)
            throw std::invalid_argument("planted translation is not unit length");
    }
};

// Error criterion: sum_i |a_i^T (t x R a_i')| / (||a_i|| ||a_i'||).  Vanishes
// exactly at the true motion and measures normalized algebraic error else.
inline double motion_error(const Mat3& r, const Vec3& t, const MotionInstance& inst) {
    using namespace fixtures_detail;
    double s = 0.0;
    for (int i = 0; i < 5; ++i) {
        const Vec3 rap = matvec(r, inst.ap[i]);
        s += std::abs(dot(inst.a[i], cross(t, rap))) / (norm(inst.a[i]) * norm(inst.ap[i]));
    }
    return s;
}

// The six-polynomial quaternion formulation in q = (q1,q2,q3), d = (d1,d2,d3):
// five bilinear equations
//   (a^T q)(d^T a') + a^T a' + (a x q)^T a' + (a x q)^T (d x a') + a^T (d x a')
// and the dehomogenization 1 + d^T q.  With rotation quaternion [1, q] and
// d the vector chart of [0, t][1, q], the bilinear forms vanish identically
// at the true motion and force <[1,q],[d0,d0*d]> = 0, so the planted root
// satisfies d^T q = -1; the constraint is written with the matching sign.
inline PolySystem camera_system(const MotionInstance& inst) {
    using namespace fixtures_detail;
    PolySystem sys;
    sys.var_names = {"q1", "q2", "q3", "d1", "d2", "d3"};
    for (int i = 0; i < 5; ++i) {
        const Vec3& a = inst.a[i];
        const Vec3& b = inst.ap[i];
        const double ab = dot(a, b);
        const Vec3 ba = cross(b, a);  // (a x q).a' = q.(a' x a), same for d
        LaurentPoly f(6);
        ExponentVec e0(6);
        f.add_term(e0, Coefficient(exact_rational(ab)));
        for (int j = 0; j < 3; ++j) {
            ExponentVec eq(6), ed(6);
            eq[static_cast<std::size_t>(j)] = 1;
            ed[static_cast<std::size_t>(j) + 3] = 1;
            f.add_term(eq, Coefficient(exact_rational(ba[static_cast<std::size_t>(j)])));
            f.add_term(ed, Coefficient(exact_rational(ba[static_cast<std::size_t>(j)])));
        }
        // (a.q)(d.a') + (a x q).(d x a') = (a.q)(d.a') + (a.d)(q.a') - (a.a')(q.d)
        for (std::size_t j = 0; j < 3; ++j)
            for (std::size_t k = 0; k < 3; ++k) {
                const double c = a[j] * b[k] + a[k] * b[j] - ab * (j == k ? 1.0 : 0.0);
                if (c == 0.0) continue;
                ExponentVec e(6);
                e[j] = 1;
                e[k + 3] = 1;
                f.add_term(e, Coefficient(exact_rational(c)));
            }
        sys.polys.push_back(std::move(f));
        sys.poly_names.push_back("f" + std::to_string(i + 1));
    }
    LaurentPoly dehom(6);
    dehom.add_term(ExponentVec(6), Coefficient(Rat(1)));
    for (std::size_t j = 0; j < 3; ++j) {
        ExponentVec e(6);
        e[j] = 1;
        e[j + 3] = 1;
        dehom.add_term(e, Coefficient(Rat(1)));
    }
    sys.polys.push_back(std::move(dehom));
    sys.poly_names.push_back("f6");
    return sys;
}

// The (q, d) root planted by the instance's ground truth, in system variable
// order; empty when a chart degenerates (180-degree rotation or t normal to
// the rotation axis plane).
inline std::optional<std::array<double, 6>> planted_root(const MotionInstance& inst) {
    using namespace fixtures_detail;
    if (!inst.has_truth) return std::nullopt;
    // quaternion of the rotation, positive scalar part
    const Mat3& r = inst.rot;
    const double tr = r[0][0] + r[1][1] + r[2][2];
    if (tr <= -1.0 + 1e-9) return std::nullopt;
    const double w = 0.5 * std::sqrt(1.0 + tr);
    const Quat q{w, (r[2][1] - r[1][2]) / (4 * w), (r[0][2] - r[2][0]) / (4 * w),
                 (r[1][0] - r[0][1]) / (4 * w)};
    const Quat dq = qmul(Quat{0.0, inst.trans[0], inst.trans[1], inst.trans[2]}, q);
    if (std::abs(q[0]) < 1e-9 || std::abs(dq[0]) < 1e-9) return std::nullopt;
    return std::array<double, 6>{q[1] / q[0],  q[2] / q[0],  q[3] / q[0],
                                 dq[1] / dq[0], dq[2] / dq[0], dq[3] / dq[0]};
}

// Inverse dictionary: (q, d) root -> rotation + unit translation.  The
// translation quaternion is [1,d][1,q]^*; its vector part carries t's
// direction (scale is unobservable).
inline std::pair<Mat3, Vec3> motion_from_root(const std::array<double, 6>& root) {
    using namespace fixtures_detail;
    Quat q{1.0, root[0], root[1], root[2]};
    const double n =
        std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]);
    for (double& c : q) c /= n;
    const Quat dq{1.0, root[3], root[4], root[5]};
    const Quat tq = qmul(dq, qconj(q));
    Vec3 t{tq[1], tq[2], tq[3]};
    const double tn = norm(t);
    if (tn == 0.0) throw std::invalid_argument("motion_from_root: zero translation direction");
    for (double& c : t) c /= tn;
    return {rotation_of(q), t};
}

// Synthetic plant: uniform random rotation, random unit translation, five
// scene points projected into both frames.  Resamples configurations whose
// depths or quaternion charts are nearly degenerate.
inline MotionInstance plant_motion(std::uint64_t seed) {
    using namespace fixtures_detail;
    Rng rng(seed);
    const auto gauss = [&rng]() {
        const double u1 = rng.uniform_real(1e-12, 1.0);
        const double u2 = rng.uniform_real(0.0, 6.283185307179586);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(u2);
    };
    for (int attempt = 0; attempt < 256; ++attempt) {
        Quat q{gauss(), gauss(), gauss(), gauss()};
        const double qn = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]);
        if (qn < 1e-6) continue;
        for (double& c : q) c /= qn;
        if (std::abs(q[0]) < 0.15) continue;  // keep the chart [1, q] well-scaled
        Vec3 t{gauss(), gauss(), gauss()};
        const double tn = norm(t);
        if (tn < 1e-6) continue;
        for (double& c : t) c /= tn;
        // d-chart scalar is -t.q_vec; keep it away from zero
        if (std::abs(t[0] * q[1] + t[1] * q[2] + t[2] * q[3]) < 0.05) continue;

        MotionInstance inst;
        inst.has_truth = true;
        inst.rot = rotation_of(q);
        inst.trans = t;
        bool ok = true;
        for (int i = 0; i < 5 && ok; ++i) {
            bool placed = false;
            for (int pt = 0; pt < 64 && !placed; ++pt) {
                const Vec3 x{rng.uniform_real(-1.0, 1.0), rng.uniform_real(-1.0, 1.0),
                             rng.uniform_real(1.5, 3.5)};
                const Vec3 xp = mat_tvec(inst.rot, sub(x, t));
                if (norm(x) < 0.3 || norm(xp) < 0.3) continue;  // near-degenerate depth
                inst.a[static_cast<std::size_t>(i)] = x;
                inst.ap[static_cast<std::size_t>(i)] = xp;
                placed = true;
            }
            ok = placed;
        }
        if (!ok) continue;
        if (!planted_root(inst)) continue;
        return inst;
    }
    throw std::runtime_error("plant_motion: no nondegenerate configuration found");
}

// Near-degenerate configuration: rotation of 60.00145558 degrees about the
// z axis with translation (.01, .01, -1) normalized; produces clustered real
// roots and an ill-conditioned constant block.
inline MotionInstance stress_motion(std::uint64_t seed = 0xca3e5aULL) {
    using namespace fixtures_detail;
    const double angle = 60.00145558 * 3.14159265358979323846 / 180.0;
    const Quat q{std::cos(angle / 2), 0.0, 0.0, std::sin(angle / 2)};
    Vec3 t{0.01, 0.01, -1.0};
    const double tn = norm(t);
    for (double& c : t) c /= tn;

    MotionInstance inst;
    inst.has_truth = true;
    inst.rot = rotation_of(q);
    inst.trans = t;
    Rng rng(seed);
    for (int i = 0; i < 5; ++i) {
        for (int pt = 0; pt < 64; ++pt) {
            const Vec3 x{rng.uniform_real(-1.0, 1.0), rng.uniform_real(-1.0, 1.0),
                         rng.uniform_real(1.5, 3.5)};
            const Vec3 xp = mat_tvec(inst.rot, sub(x, t));
            if (norm(x) < 0.3 || norm(xp) < 0.3) continue;
            inst.a[static_cast<std::size_t>(i)] = x;
            inst.ap[static_cast<std::size_t>(i)] = xp;
            break;
        }
    }
    return inst;
}

// ---------------------------------------------------------------------------
// Cyclic-molecule conformation.

// Coefficient matrix of the three half-angle equations
//   f_i = b_i1 + b_i2 t_j^2 + b_i3 t_k^2 + b_i4 t_j^2 t_k^2 + b_i5 t_j t_k,
// where (i, j, k) runs cyclically over (1,2,3).
struct MoleculeInstance {
    std::array<std::array<Rat, 5>, 3> beta;

    MoleculeInstance scaled(const Rat& s) const {
        MoleculeInstance out = *this;
        for (auto& row : out.beta)
            for (auto& c : row) c *= s;
        return out;
    }
};

inline MoleculeInstance molecule_from_rows(const std::array<std::array<std::int64_t, 5>, 3>& rows) {
    MoleculeInstance inst;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 5; ++j) inst.beta[i][j] = Rat(rows[i][j]);
    return inst;
}

// First synthetic instance: all flap angles 90 degrees feasible, all
// coefficients scaled to integers.
inline MoleculeInstance molecule_instance_1() {
    return molecule_from_rows({{{-9, -1, -1, 3, 8}, {-9, -1, -1, 3, 8}, {-9, -1, -1, 3, 8}}});
}

// Perturbed-cyclohexane coefficients.
inline MoleculeInstance cyclohexane_instance() {
    return molecule_from_rows({{{-310, 959, 774, 1313, 1389},
                                {-365, 755, 917, 1269, 1451},
                                {-413, 837, 838, 1352, 1655}}});
}

// Symmetric instance with 16 real roots, most of them triple.
inline MoleculeInstance symmetric_instance() {
    return molecule_from_rows(
        {{{-13, -1, -1, -1, 24}, {-13, -1, -1, -1, 24}, {-13, -1, -1, -1, 24}}});
}

inline PolySystem molecule_system(const MoleculeInstance& inst) {
    PolySystem sys;
    sys.var_names = {"t1", "t2", "t3"};
    for (std::size_t i = 0; i < 3; ++i) {
        const std::size_t j = (i + 1) % 3;
        const std::size_t k = (i + 2) % 3;
        LaurentPoly f(3);
        const auto& b = inst.beta[i];
        ExponentVec e(3);
        f.add_term(e, Coefficient(b[0]));
        e = ExponentVec(3);
        e[j] = 2;
        f.add_term(e, Coefficient(b[1]));
        e = ExponentVec(3);
        e[k] = 2;
        f.add_term(e, Coefficient(b[2]));
        e = ExponentVec(3);
        e[j] = 2;
        e[k] = 2;
        f.add_term(e, Coefficient(b[3]));
        e = ExponentVec(3);
        e[j] = 1;
        e[k] = 1;
        f.add_term(e, Coefficient(b[4]));
        sys.polys.push_back(std::move(f));
        sys.poly_names.push_back("f" + std::to_string(i + 1));
    }
    return sys;
}

// The flap-angle equations before the half-angle substitution:
//   g_i = a_i1 + a_i2 cos h_j + a_i3 cos h_k + a_i4 cos h_j cos h_k
//       + a_i5 sin h_j sin h_k.
// Exact clearing of the (1 + t_j^2)(1 + t_k^2) denominators:
//   beta = (a1+a2+a3+a4, a1-a2+a3-a4, a1+a2-a3-a4, a1-a2-a3+a4, 4 a5).
inline MoleculeInstance trig_to_halfangle(const std::array<std::array<Rat, 5>, 3>& alpha) {
    MoleculeInstance inst;
    for (std::size_t i = 0; i < 3; ++i) {
        const auto& a = alpha[i];
        inst.beta[i][0] = a[0] + a[1] + a[2] + a[3];
        inst.beta[i][1] = a[0] - a[1] + a[2] - a[3];
        inst.beta[i][2] = a[0] + a[1] - a[2] - a[3];
        inst.beta[i][3] = a[0] - a[1] - a[2] + a[3];
        inst.beta[i][4] = Rat(4) * a[4];
    }
    return inst;
}

// Largest absolute value of the three flap-angle equations at angles given in
// radians; used for half-angle round-trip checks.
inline double theta_system_residual(const std::array<std::array<Rat, 5>, 3>& alpha,
                                    const std::array<double, 3>& theta) {
    double worst = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        const std::size_t j = (i + 1) % 3;
        const std::size_t k = (i + 2) % 3;
        const auto& a = alpha[i];
        const double v = to_double(a[0]) + to_double(a[1]) * std::cos(theta[j]) +
                         to_double(a[2]) * std::cos(theta[k]) +
                         to_double(a[3]) * std::cos(theta[j]) * std::cos(theta[k]) +
                         to_double(a[4]) * std::sin(theta[j]) * std::sin(theta[k]);
        worst = std::max(worst, std::abs(v));
    }
    return worst;
}

// Alpha matrix whose 90-degree conformation is feasible and whose half-angle
// image, scaled by 8, is the first instance's integer matrix.
inline std::array<std::array<Rat, 5>, 3> molecule_alpha_90() {
    const std::array<Rat, 5> row{Rat(-1, 4), Rat(-3, 8), Rat(-3, 8), Rat(-1, 8), Rat(1, 4)};
    return {row, row, row};
}

}  // namespace sparsolve

#endif  // SPARSOLVE_FIXTURES_HPP
