#include "flcsim/trace_io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace flcsim {

namespace {

void append_row(std::string& out, const TraceRecord& r) {
    char buf[512];
    const int n = std::snprintf(buf, sizeof buf,
                                "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%u\n",
                                r.t, r.x1, r.x2, r.u, r.d_true, r.d_hat_bn, r.d_hat_sl, r.tau,
                                r.tau_c, r.tau_n, r.s, r.q, static_cast<unsigned>(r.guards));
    out.append(buf, static_cast<std::size_t>(n));
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << text;
    out.close();
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace

std::string trace_to_csv(const RunTrace& trace, std::size_t stride) {
    if (stride == 0) stride = 1;
    std::string out = kTraceCsvHeader;
    out += '\n';
    out.reserve(trace.records.size() / stride * 200 + 128);
    const std::size_t n = trace.records.size();
    for (std::size_t k = 0; k < n; ++k)
        if (k % stride == 0 || k + 1 == n) append_row(out, trace.records[k]);
    return out;
}

void export_trace(const RunTrace& trace, const std::string& path, std::size_t stride) {
    write_file(path, trace_to_csv(trace, stride));
}

void export_metadata(const RunTrace& trace, const std::string& path) {
    const auto& m = trace.meta;
    nlohmann::json j = {
        {"config_hash", m.config_hash},
        {"scheme", m.scheme},
        {"variant", m.variant},
        {"code_version", m.code_version},
        {"records", trace.records.size()},
        {"trace_hash", trace_hash(trace)},
        {"guards",
         {{"sigma_singular", m.guard_totals.sigma_singular},
          {"sigma_step", m.guard_totals.sigma_step},
          {"sigma_floor", m.guard_totals.sigma_floor},
          {"f_frozen", m.guard_totals.f_frozen},
          {"q_frozen", m.guard_totals.q_frozen}}},
        {"q_min", m.q_min},
        {"q_max", m.q_max},
        {"q_excursions", m.q_excursions},
    };
    write_file(path, j.dump(2) + "\n");
}

RunTrace trace_from_csv(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kTraceCsvHeader)
        throw std::runtime_error(origin + ": header does not match '" + std::string(kTraceCsvHeader) + "'");

    RunTrace trace;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const char* p = line.c_str();
        double v[12];
        for (int c = 0; c < 12; ++c) {
            char* end = nullptr;
            errno = 0;
            v[c] = std::strtod(p, &end);
            if (end == p || *end != ',')
                throw std::runtime_error(origin + ":" + std::to_string(line_no) + ": malformed column " +
                                         std::to_string(c + 1));
            p = end + 1;
        }
        char* end = nullptr;
        const unsigned long guards = std::strtoul(p, &end, 10);
        if (end == p || *end != '\0')
            throw std::runtime_error(origin + ":" + std::to_string(line_no) + ": malformed guards column");
        trace.records.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9], v[10],
                                 v[11], static_cast<std::uint32_t>(guards)});
    }
    return trace;
}

RunTrace import_trace(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open trace '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return trace_from_csv(ss.str(), path);
}

std::string params_to_csv(const T2nfsParams& params) {
    std::string out = "parameter,value\n";
    char buf[128];
    for (const auto& [name, value] : to_table(params)) {
        std::snprintf(buf, sizeof buf, ",%.17g\n", value);
        out += name;
        out += buf;
    }
    return out;
}

void export_params(const T2nfsParams& params, const std::string& path) {
    write_file(path, params_to_csv(params));
}

T2nfsParams params_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "parameter,value")
        throw std::runtime_error("parameter table: missing 'parameter,value' header");
    std::vector<std::pair<std::string, double>> rows;
    std::size_t I = 0, J = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.rfind(',');
        if (comma == std::string::npos) throw std::runtime_error("parameter table: malformed row '" + line + "'");
        const std::string name = line.substr(0, comma);
        char* end = nullptr;
        const double v = std::strtod(line.c_str() + comma + 1, &end);
        if (end == line.c_str() + comma + 1 || *end != '\0')
            throw std::runtime_error("parameter table: bad value in '" + line + "'");
        unsigned i = 0, j = 0;
        if (std::sscanf(name.c_str(), "f[%u][%u]", &i, &j) == 2) {
            I = std::max<std::size_t>(I, i + 1);
            J = std::max<std::size_t>(J, j + 1);
        }
        rows.emplace_back(name, v);
    }
    return from_table(I, J, rows);
}

std::string trace_hash(const RunTrace& trace) { return hex64(fnv1a64(trace_to_csv(trace))); }

}  // namespace flcsim
