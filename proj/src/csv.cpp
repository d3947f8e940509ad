#include "motility/csv.hpp"

#include "motility/errors.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <string_view>
#include <tuple>

namespace motility::csv {

namespace {

class Table
{
public:
    Table(std::istream& in, std::string_view header)
    {
        std::string line;
        if (!std::getline(in, line)) {
            throw CsvError(1, "missing header, expected '" + std::string(header) + "'");
        }
        strip_cr(line);
        if (line != header) {
            throw CsvError(1, "bad header '" + line + "', expected '" + std::string(header) + "'");
        }
        _columns = static_cast<std::size_t>(std::count(header.begin(), header.end(), ',')) + 1;
        _in = &in;
    }

    // Reads the next non-empty row into fields; false at end of input.
    bool next()
    {
        std::string line;
        while (std::getline(*_in, line)) {
            ++_line;
            strip_cr(line);
            if (line.empty()) {
                continue;
            }
            _row = std::move(line);
            _fields.clear();
            std::string_view rest = _row;
            while (true) {
                auto const comma = rest.find(',');
                _fields.push_back(rest.substr(0, comma));
                if (comma == std::string_view::npos) {
                    break;
                }
                rest.remove_prefix(comma + 1);
            }
            if (_fields.size() != _columns) {
                fail("expected " + std::to_string(_columns) + " fields, got " +
                     std::to_string(_fields.size()));
            }
            return true;
        }
        return false;
    }

    std::string_view text(std::size_t i) const { return _fields[i]; }

    double real(std::size_t i) const
    {
        std::string_view const s = _fields[i];
        double value = 0;
        auto const [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
        if (s.empty() || ec != std::errc{} || end != s.data() + s.size()) {
            fail("field " + std::to_string(i + 1) + ": not a number: '" + std::string(s) + "'");
        }
        return value;
    }

    long long integer(std::size_t i) const
    {
        std::string_view const s = _fields[i];
        long long value = 0;
        auto const [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
        if (s.empty() || ec != std::errc{} || end != s.data() + s.size()) {
            fail("field " + std::to_string(i + 1) + ": not an integer: '" + std::string(s) + "'");
        }
        return value;
    }

    [[noreturn]] void fail(std::string const& message) const { throw CsvError(_line, message); }

private:
    static void strip_cr(std::string& line)
    {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
    }

    std::istream* _in = nullptr;
    std::size_t _columns = 0;
    int _line = 1;
    std::string _row;
    std::vector<std::string_view> _fields;
};

MarkerId marker_id(Table const& t, std::size_t i)
{
    auto const v = t.integer(i);
    if (v < 0 || v > 1'000'000) {
        t.fail("marker id out of range");
    }
    return static_cast<MarkerId>(v);
}

std::pair<MarkerId, MarkerId> parse_pair(Table const& t, std::string_view label)
{
    auto bad = [&] { t.fail("bad pair label '" + std::string(label) + "', expected pA-pB"); };
    auto const dash = label.find('-');
    if (dash == std::string_view::npos || label.size() < 5 || label[0] != 'p' ||
        label[dash + 1] != 'p') {
        bad();
    }
    auto number = [&](std::string_view s) {
        int v = 0;
        auto const [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc{} || end != s.data() + s.size() || v < 0) {
            bad();
        }
        return v;
    };
    return {number(label.substr(1, dash - 1)), number(label.substr(dash + 2))};
}

} // namespace

std::string format_number(double value)
{
    char buffer[64];
    auto const [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, end);
}

void write_trajectory(std::ostream& out, std::vector<MarkerTrack> const& tracks,
                      FrameClock const& clock)
{
    std::vector<std::tuple<FrameIndex, MarkerId, Vec2>> rows;
    for (MarkerTrack const& track : tracks) {
        for (TrackSample const& s : track.samples()) {
            rows.emplace_back(s.frame, track.id(), s.position);
        }
    }
    std::stable_sort(rows.begin(), rows.end(), [](auto const& a, auto const& b) {
        return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
    });

    out << trajectory_header << '\n';
    for (auto const& [frame, id, p] : rows) {
        out << frame << ',' << format_number(frames_to_seconds(frame, clock).value()) << ',' << id
            << ',' << format_number(p.x) << ',' << format_number(p.y) << '\n';
    }
}

std::vector<MarkerTrack> read_trajectory(std::istream& in)
{
    Table table(in, trajectory_header);
    std::map<MarkerId, std::vector<TrackSample>> samples;
    while (table.next()) {
        FrameIndex const frame = table.integer(0);
        if (frame < 0) {
            table.fail("negative frame");
        }
        table.real(1); // time is derived from the frame; only checked for form
        samples[marker_id(table, 2)].push_back({frame, {table.real(3), table.real(4)}});
    }

    std::vector<MarkerTrack> tracks;
    for (auto& [id, s] : samples) {
        std::sort(s.begin(), s.end(),
                  [](TrackSample const& a, TrackSample const& b) { return a.frame < b.frame; });
        tracks.emplace_back(id, std::move(s));
    }
    return tracks;
}

void write_displacements(std::ostream& out, std::vector<DisplacementSeries> const& series)
{
    std::vector<std::tuple<FrameIndex, MarkerId, double, double>> rows;
    for (DisplacementSeries const& d : series) {
        for (DisplacementSample const& s : d.samples) {
            rows.emplace_back(s.frame, d.marker_id, s.parallel, s.perpendicular);
        }
    }
    std::stable_sort(rows.begin(), rows.end(), [](auto const& a, auto const& b) {
        return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
    });

    out << displacement_header << '\n';
    for (auto const& [frame, id, par, perp] : rows) {
        out << frame << ',' << id << ',' << format_number(par) << ',' << format_number(perp)
            << '\n';
    }
}

std::vector<DisplacementSeries> read_displacements(std::istream& in)
{
    Table table(in, displacement_header);
    std::map<MarkerId, std::vector<DisplacementSample>> samples;
    while (table.next()) {
        samples[marker_id(table, 1)].push_back({table.integer(0), table.real(2), table.real(3)});
    }
    std::vector<DisplacementSeries> series;
    for (auto& [id, s] : samples) {
        std::sort(s.begin(), s.end(), [](auto const& a, auto const& b) { return a.frame < b.frame; });
        series.push_back({id, std::move(s)});
    }
    return series;
}

std::string pair_label(MarkerId first, MarkerId second)
{
    return "p" + std::to_string(first) + "-p" + std::to_string(second);
}

std::vector<CorrelationRow> correlation_rows(std::vector<CorrelationFunction> const& functions)
{
    std::vector<CorrelationFunction const*> ordered;
    for (auto const& f : functions) {
        ordered.push_back(&f);
    }
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](auto const* a, auto const* b) { return a->pair < b->pair; });

    std::vector<CorrelationRow> rows;
    for (auto const* f : ordered) {
        for (LagValue const& lag : f->lags) {
            rows.push_back({f->pair.first, f->pair.second, lag.delay_s, lag.value, lag.std_error});
        }
    }
    return rows;
}

void write_correlations(std::ostream& out, std::vector<CorrelationRow> const& rows)
{
    out << correlation_header << '\n';
    for (CorrelationRow const& r : rows) {
        out << pair_label(r.first, r.second) << ',' << format_number(r.delay_s) << ','
            << format_number(r.c_nm2) << ',' << format_number(r.stderr_nm2) << '\n';
    }
}

std::vector<CorrelationRow> read_correlations(std::istream& in)
{
    Table table(in, correlation_header);
    std::vector<CorrelationRow> rows;
    while (table.next()) {
        auto const [a, b] = parse_pair(table, table.text(0));
        rows.push_back({a, b, table.real(1), table.real(2), table.real(3)});
    }
    return rows;
}

void write_sweep(std::ostream& out, std::vector<SweepRecord> const& records)
{
    out << sweep_header << '\n';
    for (SweepRecord const& r : records) {
        out << format_number(r.b_mt) << ',' << format_number(r.theta_deg) << ','
            << format_number(r.intensity_nm2) << ',' << format_number(r.stderr_nm2) << ','
            << r.n_windows << '\n';
    }
}

std::vector<SweepRecord> read_sweep(std::istream& in)
{
    Table table(in, sweep_header);
    std::vector<SweepRecord> records;
    while (table.next()) {
        auto const n = table.integer(4);
        if (n < 0 || n > 1'000'000'000) {
            table.fail("n_windows out of range");
        }
        records.push_back(
            {table.real(0), table.real(1), table.real(2), table.real(3), static_cast<int>(n)});
    }
    return records;
}

void write_fits(std::ostream& out, std::vector<FitRow> const& rows)
{
    out << fit_header << '\n';
    for (FitRow const& r : rows) {
        out << format_number(r.theta_deg) << ',' << format_number(r.report.b_star_mt) << ','
            << format_number(r.report.m_a_per_m) << ',' << format_number(r.report.moment_am2)
            << ',' << format_number(r.report.moment_bohr) << ','
            << format_number(r.report.interaction_j) << ',' << format_number(r.fit.alpha) << ','
            << format_number(r.fit.beta) << ',' << format_number(r.fit.gamma) << ','
            << format_number(r.fit.residual_nm2) << '\n';
    }
}

std::vector<FitRow> read_fits(std::istream& in)
{
    Table table(in, fit_header);
    std::vector<FitRow> rows;
    while (table.next()) {
        FitRow r;
        r.theta_deg = table.real(0);
        r.report = {table.real(1), table.real(2), table.real(3), table.real(4), table.real(5)};
        r.fit.b_star_mt = r.report.b_star_mt;
        r.fit.m_hat_a_per_m = r.report.m_a_per_m;
        r.fit.alpha = table.real(6);
        r.fit.beta = table.real(7);
        r.fit.gamma = table.real(8);
        r.fit.residual_nm2 = table.real(9);
        rows.push_back(r);
    }
    return rows;
}

void write_angle_profile(std::ostream& out, std::vector<AnglePoint> const& points)
{
    out << angle_header << '\n';
    for (AnglePoint const& p : points) {
        out << format_number(p.theta_deg) << ',' << format_number(p.intensity_nm2) << ','
            << format_number(p.stderr_nm2) << ',' << p.count << '\n';
    }
}

} // namespace motility::csv
