#pragma once

#include <cstddef>
#include <string>

#include "flcsim/simulation.hpp"

namespace flcsim {

/// Header row of every exported trace, in column order.
inline constexpr const char* kTraceCsvHeader =
    "t,x1,x2,u,d_true,d_hat_bn,d_hat_sl,tau,tau_c,tau_n,s,q,guards";

/// CSV text of the trace: header plus every `stride`-th record (the last
/// record is always kept). Doubles use 17 significant digits so re-import is
/// bit-exact.
std::string trace_to_csv(const RunTrace& trace, std::size_t stride = 1);

/// Writes trace_to_csv to `path`. Throws std::runtime_error naming the path on I/O failure.
void export_trace(const RunTrace& trace, const std::string& path, std::size_t stride = 1);

/// Writes the metadata block (config hash, scheme, version, guard totals, q range) as JSON.
void export_metadata(const RunTrace& trace, const std::string& path);

/// Parses a trace CSV. Metadata is left empty. Throws std::runtime_error on
/// a header mismatch or malformed row, with path and line number.
RunTrace import_trace(const std::string& path);
RunTrace trace_from_csv(const std::string& text, const std::string& origin = "<string>");

/// Network parameter table as "parameter,value" CSV (rows from to_table).
std::string params_to_csv(const T2nfsParams& params);
void export_params(const T2nfsParams& params, const std::string& path);

/// Inverse of params_to_csv; the shape is inferred from the f rows.
T2nfsParams params_from_csv(const std::string& text);

/// FNV-1a 64 of the full-resolution CSV, as hex.
std::string trace_hash(const RunTrace& trace);

}  // namespace flcsim
