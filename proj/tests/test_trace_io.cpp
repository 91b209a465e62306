#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "leocdn/error.hpp"
#include "leocdn/trace_io.hpp"
#include "oracles.hpp"

using namespace leocdn;

namespace {

RequestTrace make_trace(double t, std::int64_t req, int hops) {
    RequestTrace tr;
    tr.time = t;
    tr.req = req;
    tr.client_gst = 12;
    tr.origin_gst = 3;
    tr.item = static_cast<ItemId>(req * 7 + 1);
    tr.size = 4321 + static_cast<std::uint32_t>(req);
    tr.path.push_back(PathNode::ground(12));
    for (int i = 0; i < hops; ++i) tr.path.push_back(PathNode::sat({i % 24, (65 - i) % 66}));
    tr.path.push_back(PathNode::ground(3));
    tr.ingress = tr.path[1].satellite;
    tr.egress = tr.path[tr.path.size() - 2].satellite;
    return tr;
}

std::vector<std::pair<double, std::vector<RequestTrace>>> sample_steps() {
    return {{0.0, {make_trace(0.0, 0, 1), make_trace(0.0, 1, 5)}},
            {0.25, {make_trace(0.25, 0, 3)}},
            {17.125, {make_trace(17.125, 0, 2), make_trace(17.125, 1, 2), make_trace(17.125, 2, 9)}}};
}

void expect_equal(const RequestTrace& a, const RequestTrace& b) {
    EXPECT_EQ(a.time, b.time);
    EXPECT_EQ(a.req, b.req);
    EXPECT_EQ(a.client_gst, b.client_gst);
    EXPECT_EQ(a.ingress, b.ingress);
    EXPECT_EQ(a.egress, b.egress);
    EXPECT_EQ(a.origin_gst, b.origin_gst);
    EXPECT_EQ(a.item, b.item);
    EXPECT_EQ(a.size, b.size);
    EXPECT_EQ(a.path, b.path);
}

void round_trip(TraceFormat format) {
    std::ostringstream out;
    TraceWriter w(out, format, 424242);
    const auto steps = sample_steps();
    for (const auto& [t, tr] : steps) w.write(tr);

    std::istringstream in(out.str());
    TraceReader r(in, "rt");
    EXPECT_EQ(r.format(), format);
    ASSERT_TRUE(r.seed());
    EXPECT_EQ(*r.seed(), 424242u);
    double t = 0.0;
    std::vector<RequestTrace> got;
    for (const auto& [want_t, want] : steps) {
        ASSERT_TRUE(r.next_step(t, got));
        EXPECT_EQ(t, want_t);
        ASSERT_EQ(got.size(), want.size());
        for (std::size_t i = 0; i < want.size(); ++i) expect_equal(got[i], want[i]);
    }
    EXPECT_FALSE(r.next_step(t, got));
}

std::string csv_with(const std::string& rows) {
    return "# leocdn trace seed=1\n" + std::string(kTraceCsvHeader) + "\n" + rows;
}

std::size_t parse_error_line(const std::string& text) {
    std::istringstream in(text);
    double t = 0.0;
    std::vector<RequestTrace> got;
    try {
        TraceReader r(in, "bad.csv");
        while (r.next_step(t, got)) {
        }
    } catch (const ParseError& e) {
        return e.line();
    }
    return 0;
}

}  // namespace

TEST(TraceIo, CsvRoundTrip) { round_trip(TraceFormat::Csv); }
TEST(TraceIo, BinaryRoundTrip) { round_trip(TraceFormat::Binary); }

TEST(TraceIo, CsvLayout) {
    std::ostringstream out;
    TraceWriter w(out, TraceFormat::Csv, 9);
    const std::vector<RequestTrace> one{make_trace(2.0, 0, 2)};
    w.write(one);
    EXPECT_EQ(out.str(), "# leocdn trace seed=9\n" + std::string(kTraceCsvHeader) +
                             "\n2,0,12,0,65,1,64,3,1,4321,G12;S0.65;S1.64;G3\n");
}

TEST(TraceIo, BinaryHeader) {
    std::ostringstream out;
    TraceWriter w(out, TraceFormat::Binary, 0x0102030405060708ULL);
    const std::vector<RequestTrace> one{make_trace(0.0, 0, 1)};
    w.write(one);
    const std::string s = out.str();
    EXPECT_EQ(s.substr(0, 5), "LCDN1");
    EXPECT_EQ(static_cast<unsigned char>(s[5]), 0x08);
    EXPECT_EQ(static_cast<unsigned char>(s[12]), 0x01);
    // length prefix + 52 fixed bytes + 3 path nodes of 9 bytes
    EXPECT_EQ(s.size(), 13u + 4u + 52u + 27u);
}

TEST(TraceIo, MalformedCsvReportsLine) {
    EXPECT_EQ(parse_error_line(csv_with("0,0,1,0,0,0,0,2,1,100,G1;S0.0;G2\n0,1,1,0,0\n")), 4u);
    EXPECT_EQ(parse_error_line(csv_with("0,0,x,0,0,0,0,2,1,100,G1;S0.0;G2\n")), 3u);
    EXPECT_EQ(parse_error_line(csv_with("0,0,1,0,0,0,0,2,1,100,G1;Q0.0;G2\n")), 3u);
    EXPECT_EQ(parse_error_line("t,req\n"), 1u);
}

TEST(TraceIo, TruncatedBinaryIsParseError) {
    std::ostringstream out;
    TraceWriter w(out, TraceFormat::Binary, 1);
    const std::vector<RequestTrace> one{make_trace(0.0, 0, 4)};
    w.write(one);
    const std::string s = out.str();
    std::istringstream in(s.substr(0, s.size() - 5));
    TraceReader r(in, "cut.bin");
    double t = 0.0;
    std::vector<RequestTrace> got;
    EXPECT_THROW(r.next_step(t, got), ParseError);
}

TEST(TraceIo, OrderingViolationIsValidationError) {
    std::istringstream in(csv_with("1,0,1,0,0,0,0,2,1,100,G1;S0.0;G2\n0,0,1,0,0,0,0,2,1,100,G1;S0.0;G2\n"));
    TraceReader r(in, "order.csv");
    double t = 0.0;
    std::vector<RequestTrace> got;
    EXPECT_THROW(
        {
            while (r.next_step(t, got)) {
            }
        },
        ValidationError);
    std::istringstream dup(csv_with("1,0,1,0,0,0,0,2,1,100,G1;S0.0;G2\n1,0,1,0,0,0,0,2,1,100,G1;S0.0;G2\n"));
    TraceReader r2(dup, "dup.csv");
    EXPECT_THROW(r2.next_step(t, got), ValidationError);
}

TEST(TraceIo, MemorySourceRewinds) {
    MemoryTraceSource mem;
    for (const auto& [t, tr] : sample_steps()) mem.add_step(t, tr);
    double t = 0.0;
    std::vector<RequestTrace> got;
    int n = 0;
    while (mem.next_step(t, got)) ++n;
    mem.rewind();
    while (mem.next_step(t, got)) ++n;
    EXPECT_EQ(n, 6);
}

TEST(TraceIo, MissingFileIsIoError) {
    EXPECT_THROW(TraceFile("/nonexistent/leocdn/traces.csv"), IoError);
}

TEST(TraceIo, FileRoundTrip) {
    const auto dir = oracle::temp_dir("traceio");
    {
        std::ofstream f(dir / "t.bin", std::ios::binary);
        TraceWriter w(f, TraceFormat::Binary, 5);
        for (const auto& [t, tr] : sample_steps()) w.write(tr);
    }
    TraceFile file(dir / "t.bin");
    EXPECT_EQ(file.reader().format(), TraceFormat::Binary);
    double t = 0.0;
    std::vector<RequestTrace> got;
    int n = 0;
    while (file.next_step(t, got)) ++n;
    EXPECT_EQ(n, 3);
    std::filesystem::remove_all(dir);
}

TEST(MetricsIo, RoundTrip) {
    std::vector<StepMetrics> series(3);
    for (std::size_t i = 0; i < series.size(); ++i) {
        auto& m = series[i];
        m.time = static_cast<double>(i);
        m.avg_hops = 1.0 / 3.0 + static_cast<double>(i);
        m.hit_ratio = 0.1 * static_cast<double>(i);
        m.avg_storage_all_pops = 1234.5678901234;
        m.nonempty_pop_count = i * 11;
        m.request_bytes = 1ULL << (40 + i);
        m.propagation_bytes = 17 * i;
    }
    std::ostringstream out;
    write_metrics_csv(out, series, "SAT-REP", 3);
    EXPECT_EQ(out.str().rfind("# leocdn metrics strategy=SAT-REP seed=3\n" + std::string(kMetricsCsvHeader) + "\n", 0), 0u);
    std::istringstream in(out.str());
    const auto back = read_metrics_csv(in, "m.csv");
    ASSERT_EQ(back.size(), series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        EXPECT_EQ(back[i].time, series[i].time);
        EXPECT_EQ(back[i].avg_hops, series[i].avg_hops);
        EXPECT_EQ(back[i].hit_ratio, series[i].hit_ratio);
        EXPECT_EQ(back[i].avg_storage_all_pops, series[i].avg_storage_all_pops);
        EXPECT_EQ(back[i].nonempty_pop_count, series[i].nonempty_pop_count);
        EXPECT_EQ(back[i].request_bytes, series[i].request_bytes);
        EXPECT_EQ(back[i].propagation_bytes, series[i].propagation_bytes);
    }
    std::istringstream bad("# x\n" + std::string(kMetricsCsvHeader) + "\n1,2,3\n");
    EXPECT_THROW(read_metrics_csv(bad, "bad.csv"), ParseError);
}

TEST(SummaryJson, NullsAndKeys) {
    SummaryReport r;
    r.strategy = "GST";
    r.seed = 11;
    r.mean_hops = 2.5;
    r.epoch_mean_hops = std::numeric_limits<double>::quiet_NaN();
    r.time_to_99_first = 120.0;
    const auto j = nlohmann::json::parse(summary_to_json(r));
    EXPECT_EQ(j["strategy"], "GST");
    EXPECT_EQ(j["seed"], 11);
    EXPECT_EQ(j["mean_hops"], 2.5);
    EXPECT_TRUE(j["epoch_mean_hops"].is_null());
    EXPECT_TRUE(j["time_to_99_hit_ratio_sustained_s"].is_null());
    EXPECT_EQ(j["time_to_99_hit_ratio_first_s"], 120.0);
    EXPECT_TRUE(j["bandwidth_ratio_vs_baseline"].is_null());
    EXPECT_EQ(j.size(), 21u);
}
