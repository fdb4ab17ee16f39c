#include "cascade/pairstate.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "cascade/errors.hpp"

namespace cascade {

namespace {

// Kronrod 15-point abscissae on [-1, 1] (non-negative half) and weights; the
// odd-indexed abscissae are the embedded 7-point Gauss rule.
constexpr std::array<double, 8> kXgk{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr int kMaxPanelDepth = 30;

struct Panel {
    Eigen::Matrix4cd kronrod;
    double error;
};

Panel kronrod_panel(const Liouvillian& liouvillian, double a, double b)
{
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const auto G = [&](double tau) { return pair_correlator(liouvillian, tau); };

    const Eigen::Matrix4cd fc = G(center);
    Eigen::Matrix4cd k15 = kWgk[7] * fc;
    Eigen::Matrix4cd g7 = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const Eigen::Matrix4cd f1 = G(center - half * kXgk[j]);
        const Eigen::Matrix4cd f2 = G(center + half * kXgk[j]);
        k15 += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) g7 += kWg[j / 2] * (f1 + f2);
    }
    k15 *= half;
    g7 *= half;
    return Panel{k15, (k15 - g7).cwiseAbs().maxCoeff()};
}

void integrate_adaptive(const Liouvillian& liouvillian, double a, double b, double tol, int depth,
                        GatedCorrelator& acc)
{
    Panel p = kronrod_panel(liouvillian, a, b);
    if (p.error <= tol || depth >= kMaxPanelDepth) {
        acc.integral += p.kronrod;
        acc.error_estimate += p.error;
        ++acc.panels;
        return;
    }
    const double mid = 0.5 * (a + b);
    integrate_adaptive(liouvillian, a, mid, 0.5 * tol, depth + 1, acc);
    integrate_adaptive(liouvillian, mid, b, 0.5 * tol, depth + 1, acc);
}

void check_structure(const Eigen::Matrix4cd& m)
{
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            const bool allowed = i == j || (i == HH && j == VV) || (i == VV && j == HH);
            if (!allowed && std::abs(m(i, j)) > TwoPhotonState::kStructureTol) {
                throw Error(ErrorKind::NonPhysical,
                            "two-photon state entry (" + std::to_string(i) + "," + std::to_string(j) +
                                ") violates the X structure");
            }
        }
    }
}

void append_double(std::string& out, double v)
{
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
    out.append(buf.data(), res.ptr);
}

double parse_double(std::string_view s, std::string_view token)
{
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw Error(ErrorKind::Parse, "bad number in complex literal '" + std::string(token) + "'");
    }
    return v;
}

cplx parse_complex(std::string_view token)
{
    if (token.size() < 2 || token.back() != 'j') {
        throw Error(ErrorKind::Parse, "complex literal must end in 'j': '" + std::string(token) + "'");
    }
    const std::string_view body = token.substr(0, token.size() - 1);
    // Split at the last sign that is neither leading nor an exponent sign.
    std::size_t split = std::string_view::npos;
    for (std::size_t i = body.size(); i-- > 1;) {
        if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    if (split == std::string_view::npos) {
        throw Error(ErrorKind::Parse, "complex literal lacks an imaginary part: '" + std::string(token) + "'");
    }
    const double re = parse_double(body.substr(0, split), token);
    std::string_view im_text = body.substr(split + 1);
    double im = parse_double(im_text, token);
    if (body[split] == '-') im = -im;
    return {re, im};
}

} // namespace

TwoPhotonState::TwoPhotonState(const Eigen::Matrix4cd& elements)
    : elements_(elements)
{
    const DensityMatrix check{Eigen::MatrixXcd(elements_)};
    check_structure(elements_);
}

GatedCorrelator integrate_gate(const Liouvillian& liouvillian, double tau_g, double w_g, double abs_tol)
{
    if (!(tau_g >= 0.0) || !(w_g > 0.0)) {
        throw Error(ErrorKind::Domain, "gate requires tau_g >= 0 and w_g > 0");
    }
    GatedCorrelator acc;
    acc.integral.setZero();
    integrate_adaptive(liouvillian, tau_g, tau_g + w_g, abs_tol, 0, acc);
    return acc;
}

TwoPhotonState rho1_gated(const DotParams& params)
{
    const Liouvillian L = build_liouvillian(params);
    const GatedCorrelator gated = integrate_gate(L, params.tau_g, params.w_g);
    const double trace = gated.integral.trace().real();
    if (!(trace >= 1e-300)) {
        throw Error(ErrorKind::DegenerateGate, "gate-integrated trace " + std::to_string(trace) + " is too small");
    }
    const Eigen::Matrix4cd raw = gated.integral / trace;
    TwoPhotonState validated(raw);
    Eigen::Matrix4cd herm = 0.5 * (raw + raw.adjoint());
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            const bool keep = i == j || (i == HH && j == VV) || (i == VV && j == HH);
            if (!keep) herm(i, j) = 0.0;
        }
        herm(i, i) = herm(i, i).real();
    }
    return TwoPhotonState(herm);
}

TwoPhotonState rho2_dephased(const TwoPhotonState& rho1)
{
    Eigen::Matrix4cd d = Eigen::Matrix4cd::Zero();
    d.diagonal() = rho1.elements().diagonal();
    return TwoPhotonState(d);
}

TwoPhotonState mix_state(const TwoPhotonState& rho1, const TwoPhotonState& rho2, double eta, double g)
{
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw Error(ErrorKind::Domain, "mix_state requires 0 <= eta <= 1");
    }
    if (!(g >= 0.0) || !std::isfinite(g)) {
        throw Error(ErrorKind::Domain, "mix_state requires finite g >= 0");
    }
    const Eigen::Matrix4cd noise = 0.25 * Eigen::Matrix4cd::Identity();
    const Eigen::Matrix4cd mixed = (eta * rho1.elements() + (1.0 - eta) * rho2.elements() + g * noise) / (1.0 + g);
    return TwoPhotonState(mixed);
}

TwoPhotonState polarization_state(const DotParams& params)
{
    const TwoPhotonState rho1 = rho1_gated(params);
    return mix_state(rho1, rho2_dephased(rho1), params.eta, params.g);
}

std::string format_matrix(const Eigen::Matrix4cd& m)
{
    std::string out;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            if (j > 0) out += ' ';
            const cplx z = m(i, j);
            append_double(out, z.real());
            out += std::signbit(z.imag()) ? '-' : '+';
            append_double(out, std::abs(z.imag()));
            out += 'j';
        }
        out += '\n';
    }
    return out;
}

Eigen::Matrix4cd parse_matrix(std::string_view text)
{
    Eigen::Matrix4cd m;
    std::istringstream in{std::string(text)};
    std::string line;
    int row = 0;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::vector<std::string> tokens;
        for (std::string tok; ls >> tok;) tokens.push_back(tok);
        if (tokens.empty()) continue;
        if (row >= 4) {
            throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": more than 4 rows");
        }
        if (tokens.size() != 4) {
            throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": expected 4 entries, got " +
                                              std::to_string(tokens.size()));
        }
        for (int j = 0; j < 4; ++j) m(row, j) = parse_complex(tokens[j]);
        ++row;
    }
    if (row != 4) {
        throw Error(ErrorKind::Parse, "expected 4 rows, got " + std::to_string(row));
    }
    return m;
}

void write_matrix_file(const std::filesystem::path& path, const Eigen::Matrix4cd& m)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
    out << format_matrix(m);
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

Eigen::Matrix4cd read_matrix_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_matrix(ss.str());
}

} // namespace cascade
