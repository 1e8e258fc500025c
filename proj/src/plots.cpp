#include "flcsim/plots.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <stdexcept>

#include "flcsim/metrics.hpp"

namespace flcsim {

namespace {

constexpr std::array<const char*, 6> kColors{"#1f77b4", "#d62728", "#2ca02c",
                                             "#9467bd", "#ff7f0e", "#8c564b"};
constexpr double kWidth = 900, kHeight = 420, kLeft = 70, kRight = 160, kTop = 40, kBottom = 50;
constexpr std::size_t kMaxPoints = 3000;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else if (c == '&') out += "&amp;";
        else out += c;
    }
    return out;
}

}  // namespace

void write_svg_plot(const std::string& path, const std::string& title, const std::string& x_label,
                    const std::string& y_label, const std::vector<Series>& series) {
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto& s : series)
        for (std::size_t k = 0; k < s.x.size(); ++k) {
            if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k])) continue;
            x0 = std::min(x0, s.x[k]);
            x1 = std::max(x1, s.x[k]);
            y0 = std::min(y0, s.y[k]);
            y1 = std::max(y1, s.y[k]);
        }
    if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x1 == x0) x1 = x0 + 1;
    if (y1 == y0) y0 -= 0.5, y1 += 0.5;
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;

    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto sx = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
    auto sy = [&](double y) { return kTop + (y1 - y) / (y1 - y0) * ph; };

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
        << escape(title) << "</text>\n"
        << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = x0 + (x1 - x0) * k / 4.0, yv = y0 + (y1 - y0) * k / 4.0;
        out << "<text x=\"" << sx(xv) << "\" y=\"" << kTop + ph + 16 << "\" text-anchor=\"middle\">"
            << fmt(xv) << "</text>\n"
            << "<text x=\"" << kLeft - 6 << "\" y=\"" << sy(yv) + 4 << "\" text-anchor=\"end\">" << fmt(yv)
            << "</text>\n"
            << "<line x1=\"" << kLeft << "\" x2=\"" << kLeft + pw << "\" y1=\"" << sy(yv) << "\" y2=\""
            << sy(yv) << "\" stroke=\"#ddd\"/>\n";
    }
    out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 12 << "\" text-anchor=\"middle\">"
        << escape(x_label) << "</text>\n"
        << "<text x=\"16\" y=\"" << kTop + ph / 2 << "\" transform=\"rotate(-90 16 " << kTop + ph / 2
        << ")\" text-anchor=\"middle\">" << escape(y_label) << "</text>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        const char* color = kColors[i % kColors.size()];
        const std::size_t stride = std::max<std::size_t>(1, s.x.size() / kMaxPoints);
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.3\" points=\"";
        for (std::size_t k = 0; k < s.x.size(); k += stride)
            if (std::isfinite(s.x[k]) && std::isfinite(s.y[k]))
                out << fmt(sx(s.x[k])) << ',' << fmt(sy(s.y[k])) << ' ';
        out << "\"/>\n";
        const double ly = kTop + 14 + 18.0 * static_cast<double>(i);
        out << "<line x1=\"" << kLeft + pw + 12 << "\" x2=\"" << kLeft + pw + 36 << "\" y1=\"" << ly
            << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << kLeft + pw + 42 << "\" y=\"" << ly + 4 << "\">" << escape(s.label)
            << "</text>\n";
    }
    out << "</svg>\n";
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

std::vector<std::string> write_figures(const std::vector<std::pair<std::string, const RunTrace*>>& runs,
                                       const std::string& dir) {
    std::vector<std::string> written;
    if (runs.empty()) return written;

    using Field = std::function<double(const TraceRecord&)>;
    auto column = [](const RunTrace& tr, const Field& f, double t0 = -INFINITY, double t1 = INFINITY) {
        Series s;
        for (const auto& r : tr.records)
            if (r.t >= t0 && r.t <= t1) {
                s.x.push_back(r.t);
                s.y.push_back(f(r));
            }
        return s;
    };
    auto per_run = [&](const std::string& name, const std::string& title, const std::string& ylab,
                       const Field& f) {
        std::vector<Series> ss;
        for (const auto& [label, tr] : runs) {
            Series s = column(*tr, f);
            s.label = label;
            ss.push_back(std::move(s));
        }
        const std::string path = dir + "/" + name + ".svg";
        write_svg_plot(path, title, "t [s]", ylab, ss);
        written.push_back(path);
    };

    per_run("states_x1", "State x1", "x1", [](const TraceRecord& r) { return r.x1; });
    per_run("states_x2", "State x2", "x2", [](const TraceRecord& r) { return r.x2; });
    per_run("control", "Control signals", "u", [](const TraceRecord& r) { return r.u; });

    const RunTrace* est = runs.front().second;
    for (const auto& [label, tr] : runs)
        if (label == "sldo") est = tr;

    auto single = [&](const std::string& name, const std::string& title, const std::string& ylab,
                      const std::vector<std::pair<std::string, Field>>& fields) {
        std::vector<Series> ss;
        for (const auto& [label, f] : fields) {
            Series s = column(*est, f);
            s.label = label;
            ss.push_back(std::move(s));
        }
        const std::string path = dir + "/" + name + ".svg";
        write_svg_plot(path, title, "t [s]", ylab, ss);
        written.push_back(path);
    };
    single("disturbance", "True and estimated disturbance", "d",
           {{"d", [](const TraceRecord& r) { return r.d_true; }},
            {"d_hat_bn", [](const TraceRecord& r) { return r.d_hat_bn; }},
            {"d_hat_sl", [](const TraceRecord& r) { return r.d_hat_sl; }}});
    single("estimation_signals", "Estimation signals", "tau",
           {{"tau", [](const TraceRecord& r) { return r.tau; }},
            {"tau_c", [](const TraceRecord& r) { return r.tau_c; }},
            {"tau_n", [](const TraceRecord& r) { return r.tau_n; }}});
    single("q", "Parameter q", "q", {{"q", [](const TraceRecord& r) { return r.q; }}});

    const std::array<std::pair<double, double>, 3> phases{kPhase1, kPhase2, kPhase3};
    for (std::size_t p = 0; p < phases.size(); ++p) {
        std::vector<Series> ss;
        for (const auto& [label, tr] : runs) {
            Series s;
            s.label = label;
            for (const auto& r : tr->records)
                if (r.t >= phases[p].first && r.t <= phases[p].second) {
                    s.x.push_back(r.x1);
                    s.y.push_back(r.x2 + r.d_true);
                }
            ss.push_back(std::move(s));
        }
        const std::string path = dir + "/phase_portrait_" + std::to_string(p + 1) + ".svg";
        write_svg_plot(path,
                       "Phase portrait t = " + fmt(phases[p].first) + "-" + fmt(phases[p].second) + " s",
                       "x1", "dx1/dt", ss);
        written.push_back(path);
    }
    return written;
}

}  // namespace flcsim
