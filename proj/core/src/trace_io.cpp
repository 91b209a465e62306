#include "leocdn/trace_io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "leocdn/csv.hpp"
#include "leocdn/error.hpp"

namespace leocdn {
namespace {

template <typename T>
void put(std::string& buf, T value) {
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t,
                                 std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint8_t>>;
    const U bits = std::bit_cast<U>(value);
    for (std::size_t i = 0; i < sizeof(U); ++i) {
        buf.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
    }
}

template <typename T>
T take(const char*& p) {
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t,
                                 std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint8_t>>;
    U bits = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) {
        bits |= static_cast<U>(static_cast<U>(static_cast<unsigned char>(p[i])) << (8 * i));
    }
    p += sizeof(U);
    return std::bit_cast<T>(bits);
}

template <typename T>
T parse_field(const std::string& text, const std::string& source, std::size_t line,
              const char* name) {
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw ParseError(source, line, std::string("bad ") + name + " '" + text + "'");
    }
    return value;
}

std::string join_path(const std::vector<PathNode>& path) {
    std::string out;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i) out.push_back(';');
        out += to_string(path[i]);
    }
    return out;
}

std::optional<std::uint64_t> seed_from_comment(const std::string& line) {
    const auto pos = line.find("seed=");
    if (pos == std::string::npos) return std::nullopt;
    std::uint64_t seed = 0;
    const char* first = line.data() + pos + 5;
    const auto [ptr, ec] = std::from_chars(first, line.data() + line.size(), seed);
    if (ec != std::errc{}) return std::nullopt;
    return seed;
}

nlohmann::ordered_json optional_number(const std::optional<double>& v) {
    if (!v || !std::isfinite(*v)) return nullptr;
    return *v;
}

nlohmann::ordered_json number(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

}  // namespace

TraceWriter::TraceWriter(std::ostream& out, TraceFormat format, std::uint64_t seed)
    : out_(&out), format_(format) {
    if (format_ == TraceFormat::Csv) {
        *out_ << "# leocdn trace seed=" << seed << '\n' << kTraceCsvHeader << '\n';
    } else {
        out_->write(kTraceMagic.data(), static_cast<std::streamsize>(kTraceMagic.size()));
        buffer_.clear();
        put(buffer_, seed);
        out_->write(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
    }
}

void TraceWriter::write(std::span<const RequestTrace> traces) {
    buffer_.clear();
    for (const auto& tr : traces) {
        if (format_ == TraceFormat::Csv) {
            buffer_ += format_double(tr.time);
            buffer_ += ',' + std::to_string(tr.req) + ',' + std::to_string(tr.client_gst) + ',' +
                       std::to_string(tr.ingress.plane) + ',' + std::to_string(tr.ingress.slot) +
                       ',' + std::to_string(tr.egress.plane) + ',' +
                       std::to_string(tr.egress.slot) + ',' + std::to_string(tr.origin_gst) + ',' +
                       std::to_string(tr.item) + ',' + std::to_string(tr.size) + ',';
            buffer_ += join_path(tr.path);
            buffer_.push_back('\n');
        } else {
            std::string rec;
            put(rec, tr.time);
            put(rec, tr.req);
            put(rec, static_cast<std::int32_t>(tr.client_gst));
            put(rec, static_cast<std::int32_t>(tr.ingress.plane));
            put(rec, static_cast<std::int32_t>(tr.ingress.slot));
            put(rec, static_cast<std::int32_t>(tr.egress.plane));
            put(rec, static_cast<std::int32_t>(tr.egress.slot));
            put(rec, static_cast<std::int32_t>(tr.origin_gst));
            put(rec, static_cast<std::uint32_t>(tr.item));
            put(rec, static_cast<std::uint32_t>(tr.size));
            put(rec, static_cast<std::uint32_t>(tr.path.size()));
            for (const auto& n : tr.path) {
                put(rec, static_cast<std::uint8_t>(n.is_station() ? 0 : 1));
                put(rec, static_cast<std::int32_t>(n.is_station() ? n.station : n.satellite.plane));
                put(rec, static_cast<std::int32_t>(n.is_station() ? 0 : n.satellite.slot));
            }
            put(buffer_, static_cast<std::uint32_t>(rec.size()));
            buffer_ += rec;
        }
    }
    out_->write(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
    if (!*out_) throw IoError("failed writing trace stream");
}

TraceReader::TraceReader(std::istream& in, std::string source)
    : in_(&in), source_(std::move(source)) {
    char magic[5] = {};
    in_->read(magic, 5);
    if (in_->gcount() == 5 && std::string_view(magic, 5) == kTraceMagic) {
        format_ = TraceFormat::Binary;
        char raw[8];
        in_->read(raw, 8);
        if (in_->gcount() != 8) throw ParseError(source_, 0, "truncated binary trace header");
        const char* p = raw;
        seed_ = take<std::uint64_t>(p);
        return;
    }
    in_->clear();
    in_->seekg(0);
    std::string line;
    while (std::getline(*in_, line)) {
        ++line_;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (!seed_) seed_ = seed_from_comment(line);
            continue;
        }
        if (line != kTraceCsvHeader) throw ParseError(source_, line_, "unexpected trace header");
        return;
    }
    throw ParseError(source_, line_, "missing trace header");
}

bool TraceReader::read_csv(RequestTrace& tr) {
    std::string line;
    while (std::getline(*in_, line)) {
        ++line_;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto f = split_csv_line(line);
        if (f.size() != 11) {
            throw ParseError(source_, line_, "expected 11 fields, got " + std::to_string(f.size()));
        }
        tr.time = parse_field<double>(f[0], source_, line_, "t");
        tr.req = parse_field<std::int64_t>(f[1], source_, line_, "req");
        tr.client_gst = parse_field<int>(f[2], source_, line_, "client_gst");
        tr.ingress = {parse_field<int>(f[3], source_, line_, "ingress_plane"),
                      parse_field<int>(f[4], source_, line_, "ingress_slot")};
        tr.egress = {parse_field<int>(f[5], source_, line_, "egress_plane"),
                     parse_field<int>(f[6], source_, line_, "egress_slot")};
        tr.origin_gst = parse_field<int>(f[7], source_, line_, "origin_gst");
        tr.item = parse_field<ItemId>(f[8], source_, line_, "item");
        tr.size = parse_field<std::uint32_t>(f[9], source_, line_, "size_bytes");
        tr.path.clear();
        std::string_view rest = f[10];
        while (!rest.empty()) {
            const auto semi = rest.find(';');
            try {
                tr.path.push_back(parse_path_node(rest.substr(0, semi)));
            } catch (const std::invalid_argument& e) {
                throw ParseError(source_, line_, e.what());
            }
            if (semi == std::string_view::npos) break;
            rest.remove_prefix(semi + 1);
        }
        return true;
    }
    return false;
}

bool TraceReader::read_binary(RequestTrace& tr) {
    char len_raw[4];
    in_->read(len_raw, 4);
    if (in_->gcount() == 0) return false;
    ++line_;
    if (in_->gcount() != 4) throw ParseError(source_, line_, "truncated record length");
    const char* lp = len_raw;
    const auto len = take<std::uint32_t>(lp);
    constexpr std::uint32_t kFixed = 8 + 8 + 4 * 6 + 4 * 3;
    if (len < kFixed) throw ParseError(source_, line_, "record too short");
    std::string rec(len, '\0');
    in_->read(rec.data(), len);
    if (static_cast<std::uint32_t>(in_->gcount()) != len) {
        throw ParseError(source_, line_, "truncated record");
    }
    const char* p = rec.data();
    tr.time = take<double>(p);
    tr.req = take<std::int64_t>(p);
    tr.client_gst = take<std::int32_t>(p);
    tr.ingress.plane = take<std::int32_t>(p);
    tr.ingress.slot = take<std::int32_t>(p);
    tr.egress.plane = take<std::int32_t>(p);
    tr.egress.slot = take<std::int32_t>(p);
    tr.origin_gst = take<std::int32_t>(p);
    tr.item = take<std::uint32_t>(p);
    tr.size = take<std::uint32_t>(p);
    const auto n = take<std::uint32_t>(p);
    if (len != kFixed + 9ULL * n) throw ParseError(source_, line_, "record length mismatch");
    tr.path.clear();
    tr.path.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        const auto kind = take<std::uint8_t>(p);
        const auto a = take<std::int32_t>(p);
        const auto b = take<std::int32_t>(p);
        if (kind > 1) throw ParseError(source_, line_, "bad path node kind");
        tr.path.push_back(kind == 0 ? PathNode::ground(a) : PathNode::sat({a, b}));
    }
    return true;
}

bool TraceReader::read_record(RequestTrace& out) {
    const bool ok = format_ == TraceFormat::Csv ? read_csv(out) : read_binary(out);
    if (!ok) return false;
    const std::pair key{out.time, out.req};
    if (last_key_ && !(key > *last_key_)) {
        throw ValidationError(source_ + ":" + std::to_string(line_) +
                              ": traces not ordered by (t, req)");
    }
    last_key_ = key;
    return true;
}

bool TraceReader::next_step(double& t, std::vector<RequestTrace>& out) {
    out.clear();
    if (!pending_) {
        RequestTrace first;
        if (!read_record(first)) return false;
        pending_ = std::move(first);
    }
    t = pending_->time;
    out.push_back(std::move(*pending_));
    pending_.reset();
    RequestTrace next;
    while (read_record(next)) {
        if (next.time != t) {
            pending_ = std::move(next);
            break;
        }
        out.push_back(std::move(next));
        next = RequestTrace{};
    }
    return true;
}

TraceFile::TraceFile(const std::filesystem::path& path) : in_(path, std::ios::binary) {
    if (!in_) throw IoError("cannot read trace file " + path.string());
    reader_ = std::make_unique<TraceReader>(in_, path.string());
}

void MemoryTraceSource::add_step(double t, std::span<const RequestTrace> traces) {
    steps_.emplace_back(t, std::vector<RequestTrace>(traces.begin(), traces.end()));
}

bool MemoryTraceSource::next_step(double& t, std::vector<RequestTrace>& out) {
    if (cursor_ >= steps_.size()) return false;
    const auto& [time, traces] = steps_[cursor_++];
    t = time;
    out = traces;
    return true;
}

void write_metrics_csv(std::ostream& out, std::span<const StepMetrics> series,
                       std::string_view strategy, std::uint64_t seed) {
    out << "# leocdn metrics strategy=" << strategy << " seed=" << seed << '\n'
        << kMetricsCsvHeader << '\n';
    for (const auto& m : series) {
        out << format_double(m.time) << ',' << format_double(m.avg_hops) << ','
            << format_double(m.hit_ratio) << ',' << format_double(m.avg_storage_all_pops) << ','
            << m.nonempty_pop_count << ',' << m.request_bytes << ',' << m.propagation_bytes << '\n';
    }
}

std::vector<StepMetrics> read_metrics_csv(std::istream& in, const std::string& source) {
    std::vector<StepMetrics> out;
    std::string line;
    std::size_t line_no = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            if (line != kMetricsCsvHeader) throw ParseError(source, line_no, "unexpected metrics header");
            header = true;
            continue;
        }
        const auto f = split_csv_line(line);
        if (f.size() != 7) throw ParseError(source, line_no, "expected 7 fields");
        StepMetrics m;
        m.time = parse_field<double>(f[0], source, line_no, "t");
        m.avg_hops = parse_field<double>(f[1], source, line_no, "avg_hops");
        m.hit_ratio = parse_field<double>(f[2], source, line_no, "hit_ratio");
        m.avg_storage_all_pops = parse_field<double>(f[3], source, line_no, "avg_storage_bytes");
        m.nonempty_pop_count = parse_field<std::size_t>(f[4], source, line_no, "nonempty_pops");
        m.request_bytes = parse_field<std::uint64_t>(f[5], source, line_no, "request_bytes");
        m.propagation_bytes = parse_field<std::uint64_t>(f[6], source, line_no, "propagation_bytes");
        out.push_back(m);
    }
    if (!header) throw ParseError(source, line_no, "missing metrics header");
    return out;
}

std::vector<StepMetrics> read_metrics_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read metrics file " + path.string());
    return read_metrics_csv(in, path.string());
}

std::string summary_to_json(const SummaryReport& r) {
    nlohmann::ordered_json j;
    j["strategy"] = r.strategy;
    j["seed"] = r.seed;
    j["zipf_exponent"] = r.zipf_exponent;
    j["warmup_s"] = r.warmup;
    j["steps"] = r.steps;
    j["steps_after_warmup"] = r.steps_after_warmup;
    j["mean_hops"] = number(r.mean_hops);
    j["mean_hit_ratio"] = number(r.mean_hit_ratio);
    j["mean_storage_bytes"] = number(r.mean_storage_bytes);
    j["mean_nonempty_pops"] = number(r.mean_nonempty_pops);
    j["time_to_99_hit_ratio_first_s"] = optional_number(r.time_to_99_first);
    j["time_to_99_hit_ratio_sustained_s"] = optional_number(r.time_to_99_sustained);
    j["final_nonempty_pops"] = r.final_nonempty_pops;
    j["total_request_bytes"] = r.total_request_bytes;
    j["total_propagation_bytes"] = r.total_propagation_bytes;
    j["epoch_interval_s"] = r.epoch_interval;
    j["epoch_mean_hops"] = number(r.epoch_mean_hops);
    j["non_epoch_mean_hops"] = number(r.non_epoch_mean_hops);
    j["epoch_hop_ratio"] = number(r.epoch_hop_ratio);
    j["spike_period_s"] = optional_number(r.spike_period);
    j["bandwidth_ratio_vs_baseline"] = optional_number(r.bandwidth_ratio);
    return j.dump(2) + "\n";
}

}  // namespace leocdn
