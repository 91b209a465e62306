#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "leocdn/engine.hpp"

namespace leocdn {

// Trace CSV:
//   # leocdn trace seed=<seed>
//   t,req,client_gst,ingress_plane,ingress_slot,egress_plane,egress_slot,origin_gst,item,size_bytes,path
// with `path` a ';'-joined list of G<id>/S<plane>.<slot> nodes.
//
// Binary variant, little-endian:
//   "LCDN1" magic, u64 seed, then per record
//   u32 payload_length, f64 t, i64 req, i32 client_gst, i32 ingress_plane,
//   i32 ingress_slot, i32 egress_plane, i32 egress_slot, i32 origin_gst,
//   u32 item, u32 size_bytes, u32 path_len, path_len x (u8 kind, i32, i32)
// where kind 0 = station (id, 0) and 1 = satellite (plane, slot).

inline constexpr std::string_view kTraceCsvHeader =
    "t,req,client_gst,ingress_plane,ingress_slot,egress_plane,egress_slot,origin_gst,item,"
    "size_bytes,path";
inline constexpr std::string_view kMetricsCsvHeader =
    "t,avg_hops,hit_ratio,avg_storage_bytes,nonempty_pops,request_bytes,propagation_bytes";
inline constexpr std::string_view kTraceMagic = "LCDN1";

enum class TraceFormat { Csv, Binary };

class TraceWriter {
public:
    TraceWriter(std::ostream& out, TraceFormat format, std::uint64_t seed);
    void write(std::span<const RequestTrace> traces);

private:
    std::ostream* out_;
    TraceFormat format_;
    std::string buffer_;
};

/// Reads either format, grouping consecutive records with equal t into one step.
/// Throws ParseError on malformed records and ValidationError on ordering violations.
class TraceReader final : public TraceSource {
public:
    TraceReader(std::istream& in, std::string source);
    bool next_step(double& t, std::vector<RequestTrace>& out) override;

    TraceFormat format() const noexcept { return format_; }
    std::optional<std::uint64_t> seed() const noexcept { return seed_; }

private:
    bool read_record(RequestTrace& out);
    bool read_csv(RequestTrace& out);
    bool read_binary(RequestTrace& out);

    std::istream* in_;
    std::string source_;
    TraceFormat format_ = TraceFormat::Csv;
    std::optional<std::uint64_t> seed_;
    std::size_t line_ = 0;
    std::optional<RequestTrace> pending_;
    std::optional<std::pair<double, std::int64_t>> last_key_;
};

/// TraceReader that owns its file stream.
class TraceFile final : public TraceSource {
public:
    explicit TraceFile(const std::filesystem::path& path);
    bool next_step(double& t, std::vector<RequestTrace>& out) override { return reader_->next_step(t, out); }
    const TraceReader& reader() const noexcept { return *reader_; }

private:
    std::ifstream in_;
    std::unique_ptr<TraceReader> reader_;
};

/// Buffered in-memory trace set, e.g. to replay one trace phase several times.
class MemoryTraceSource final : public TraceSource {
public:
    void add_step(double t, std::span<const RequestTrace> traces);
    bool next_step(double& t, std::vector<RequestTrace>& out) override;
    void rewind() noexcept { cursor_ = 0; }

private:
    std::vector<std::pair<double, std::vector<RequestTrace>>> steps_;
    std::size_t cursor_ = 0;
};

void write_metrics_csv(std::ostream& out, std::span<const StepMetrics> series,
                       std::string_view strategy, std::uint64_t seed);
std::vector<StepMetrics> read_metrics_csv(std::istream& in, const std::string& source);
std::vector<StepMetrics> read_metrics_csv(const std::filesystem::path& path);

std::string summary_to_json(const SummaryReport& report);

}  // namespace leocdn
