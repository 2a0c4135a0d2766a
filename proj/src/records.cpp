// SPDX-License-Identifier: Apache-2.0
//
// fr3chan: large-scale indoor-office channel model for the FR3 bands
// Copyright (C) 2026 The fr3chan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "fr3/records.hpp"

#include "fr3/error.hpp"
#include "fr3/estimator.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>

namespace fr3
{

using nlohmann::json;

std::optional<Format> parse_format(std::string_view text)
{
    if (text == "csv")
        return Format::Csv;
    if (text == "jsonl")
        return Format::Jsonl;
    return std::nullopt;
}

std::string format_number(double value)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", value);
    return buf;
}

double round_trip(double value) { return std::strtod(format_number(value).c_str(), nullptr); }

std::vector<Record> flatten(const DropRecord &drop)
{
    std::vector<Record> out;
    out.reserve(drop.bands.size());
    for (const auto &b : drop.bands)
        out.push_back({drop.drop_id, b.band, drop.state, drop.distance_m, b.pl_db, b.lsp.sf_db, b.lsp.ds_log10s,
                       b.lsp.asa_log10deg, b.lsp.zsa_log10deg, b.bc90_hz});
    return out;
}

// ---- Writing ----------------------------------------------------------------------

RecordWriter::RecordWriter(std::ostream &out, Format format) : out_(out), format_(format)
{
    if (format_ == Format::Csv)
        out_ << kCsvHeader << '\n';
}

void RecordWriter::write(const Record &r)
{
    if (format_ == Format::Csv)
    {
        out_ << r.drop_id << ',' << band_label(r.band) << ',' << state_label(r.state) << ',' << format_number(r.d_m)
             << ',' << format_number(r.pl_db) << ',' << (std::isfinite(r.sf_db) ? format_number(r.sf_db) : "") << ','
             << format_number(r.ds_log10s) << ',' << (r.asa_log10deg ? format_number(*r.asa_log10deg) : "") << ','
             << (r.zsa_log10deg ? format_number(*r.zsa_log10deg) : "") << ',' << format_number(r.bc90_hz) << '\n';
        return;
    }
    // Hand-assembled so numbers keep the 6-digit form.
    out_ << "{\"drop_id\":" << r.drop_id << ",\"band_ghz\":\"" << band_label(r.band) << "\",\"state\":\""
         << state_label(r.state) << "\",\"d_m\":" << format_number(r.d_m) << ",\"pl_db\":" << format_number(r.pl_db)
         << ",\"ds_log10s\":" << format_number(r.ds_log10s);
    if (std::isfinite(r.sf_db))
        out_ << ",\"sf_db\":" << format_number(r.sf_db);
    if (r.asa_log10deg)
        out_ << ",\"asa_log10deg\":" << format_number(*r.asa_log10deg);
    if (r.zsa_log10deg)
        out_ << ",\"zsa_log10deg\":" << format_number(*r.zsa_log10deg);
    out_ << ",\"bc90_hz\":" << format_number(r.bc90_hz) << "}\n";
}

void RecordWriter::write(const DropRecord &drop)
{
    for (const auto &r : flatten(drop))
        write(r);
}

// ---- Reading ----------------------------------------------------------------------

namespace
{

std::vector<std::string_view> split(std::string_view line, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;)
    {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos)
            return out;
        start = pos + 1;
    }
}

std::string_view trim_cr(std::string_view s)
{
    while (!s.empty() && (s.back() == '\r' || s.back() == ' '))
        s.remove_suffix(1);
    return s;
}

double parse_double(std::string_view text, std::size_t line, std::string_view field)
{
    double v = 0.0;
    const auto *end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, v);
    if (text.empty() || res.ec != std::errc() || res.ptr != end || !std::isfinite(v))
        throw SchemaError(line, "field '" + std::string(field) + "' is not a finite number: '" + std::string(text) + "'");
    return v;
}

std::uint64_t parse_uint(std::string_view text, std::size_t line, std::string_view field)
{
    std::uint64_t v = 0;
    const auto *end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, v);
    if (text.empty() || res.ec != std::errc() || res.ptr != end)
        throw SchemaError(line, "field '" + std::string(field) + "' is not a non-negative integer: '" +
                                    std::string(text) + "'");
    return v;
}

Band parse_band_field(std::string_view text, std::size_t line)
{
    const auto b = parse_band(text);
    if (!b)
        throw SchemaError(line, "unknown band '" + std::string(text) + "'");
    return *b;
}

ChannelState parse_state_field(std::string_view text, std::size_t line)
{
    const auto s = parse_state(text);
    if (!s)
        throw SchemaError(line, "unknown state '" + std::string(text) + "'");
    return *s;
}

void check_record(Record &r, std::size_t line)
{
    if (!(r.d_m >= 1.0))
        throw SchemaError(line, "d_m must be at least 1");
    if (r.asa_log10deg.has_value() != r.zsa_log10deg.has_value())
        throw SchemaError(line, "asa_log10deg and zsa_log10deg must both be present or both absent");
}

Record parse_csv_line(std::string_view line, std::size_t line_no)
{
    const auto f = split(line, ',');
    if (f.size() != 10)
        throw SchemaError(line_no, "expected 10 fields, found " + std::to_string(f.size()));
    Record r;
    r.drop_id = parse_uint(f[0], line_no, "drop_id");
    r.band = parse_band_field(f[1], line_no);
    r.state = parse_state_field(f[2], line_no);
    r.d_m = parse_double(f[3], line_no, "d_m");
    r.pl_db = parse_double(f[4], line_no, "pl_db");
    r.sf_db = f[5].empty() ? std::numeric_limits<double>::quiet_NaN() : parse_double(f[5], line_no, "sf_db");
    r.ds_log10s = parse_double(f[6], line_no, "ds_log10s");
    if (!f[7].empty())
        r.asa_log10deg = parse_double(f[7], line_no, "asa_log10deg");
    if (!f[8].empty())
        r.zsa_log10deg = parse_double(f[8], line_no, "zsa_log10deg");
    r.bc90_hz = parse_double(f[9], line_no, "bc90_hz");
    check_record(r, line_no);
    return r;
}

double json_number(const json &j, const char *key, std::size_t line)
{
    const auto it = j.find(key);
    if (it == j.end())
        throw SchemaError(line, std::string("missing field '") + key + "'");
    if (!it->is_number() || !std::isfinite(it->get<double>()))
        throw SchemaError(line, std::string("field '") + key + "' is not a finite number");
    return it->get<double>();
}

std::optional<double> json_optional(const json &j, const char *key, std::size_t line)
{
    const auto it = j.find(key);
    if (it == j.end() || it->is_null())
        return std::nullopt;
    return json_number(j, key, line);
}

std::string json_string(const json &j, const char *key, std::size_t line)
{
    const auto it = j.find(key);
    if (it == j.end())
        throw SchemaError(line, std::string("missing field '") + key + "'");
    if (it->is_string())
        return it->get<std::string>();
    if (it->is_number())
        return format_number(it->get<double>());
    throw SchemaError(line, std::string("field '") + key + "' must be a string");
}

// Raw-measurement payloads -> a Record.
Record parse_raw(const json &j, Record r, std::size_t line)
{
    std::optional<Pdp> pdp;
    if (const auto it = j.find("pdp"); it != j.end())
    {
        Pdp p;
        p.noise_floor_mean_db = json_number(*it, "noise_floor_db", line);
        const auto taps = it->find("taps");
        if (taps == it->end() || !taps->is_array())
            throw SchemaError(line, "pdp.taps must be an array of [delay_s, power_db]");
        for (const auto &t : *taps)
        {
            if (!t.is_array() || t.size() != 2 || !t[0].is_number() || !t[1].is_number())
                throw SchemaError(line, "pdp.taps entries must be [delay_s, power_db]");
            p.taps.push_back({t[0].get<double>(), t[1].get<double>()});
        }
        try
        {
            pdp = threshold_pdp(p);
        }
        catch (const DomainError &e)
        {
            throw SchemaError(line, std::string("pdp: ") + e.what());
        }
        if (pdp->taps.empty())
            throw SchemaError(line, "pdp has no taps above the noise threshold");
    }

    std::vector<Beam> beams;
    if (const auto it = j.find("beams"); it != j.end())
    {
        if (!it->is_array() || it->empty())
            throw SchemaError(line, "beams must be a non-empty array");
        for (const auto &b : *it)
            beams.push_back({json_number(b, "azimuth_deg", line), json_number(b, "zenith_deg", line),
                             json_number(b, "power", line)});
    }
    if (!pdp && !j.contains("ds_log10s"))
        throw SchemaError(line, "record needs ds_log10s or a pdp payload");

    try
    {
        if (pdp)
        {
            const TapSet taps = pdp_to_taps(*pdp);
            const double tau = rms_delay_spread(taps);
            if (!(tau > 0.0))
                throw SchemaError(line, "pdp delay spread is zero (single tap)");
            r.ds_log10s = std::log10(tau);
        }
        else
        {
            r.ds_log10s = json_number(j, "ds_log10s", line);
        }

        if (j.contains("pl_db"))
        {
            r.pl_db = json_number(j, "pl_db", line);
        }
        else
        {
            const double tx = json_number(j, "tx_power_dbm", line);
            double rx = 0.0;
            if (pdp)
                for (const auto &t : pdp->taps)
                    rx += std::pow(10.0, t.power_db / 10.0);
            else if (!beams.empty())
                rx = synth_omni_power(beams);
            else
                throw SchemaError(line, "raw record needs pdp or beams to derive path loss");
            if (!(rx > 0.0))
                throw SchemaError(line, "received power must be positive");
            r.pl_db = tx - 10.0 * std::log10(rx);
        }

        if (!beams.empty())
        {
            const TapSet bt = beams_to_taps(beams);
            r.asa_log10deg = std::log10(asa_from_taps(bt));
            r.zsa_log10deg = std::log10(zsa_from_taps(bt));
        }
    }
    catch (const DomainError &e)
    {
        throw SchemaError(line, e.what());
    }
    r.sf_db = std::numeric_limits<double>::quiet_NaN();
    r.bc90_hz = coherence_bandwidth(std::pow(10.0, r.ds_log10s), CoherenceLevel::R90);
    return r;
}

} // namespace

Record parse_jsonl_line(std::string_view line, std::size_t line_no)
{
    json j;
    try
    {
        j = json::parse(line);
    }
    catch (const json::parse_error &e)
    {
        throw SchemaError(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object())
        throw SchemaError(line_no, "expected a JSON object");

    Record r;
    const auto id = j.find("drop_id");
    if (id == j.end() || !id->is_number_unsigned())
        throw SchemaError(line_no, "field 'drop_id' must be a non-negative integer");
    r.drop_id = id->get<std::uint64_t>();
    r.band = parse_band_field(json_string(j, "band_ghz", line_no), line_no);
    r.state = parse_state_field(json_string(j, "state", line_no), line_no);
    r.d_m = json_number(j, "d_m", line_no);

    if (j.contains("pdp") || j.contains("beams") || j.contains("tx_power_dbm"))
    {
        r = parse_raw(j, r, line_no);
    }
    else
    {
        r.pl_db = json_number(j, "pl_db", line_no);
        r.sf_db = json_optional(j, "sf_db", line_no).value_or(std::numeric_limits<double>::quiet_NaN());
        r.ds_log10s = json_number(j, "ds_log10s", line_no);
        r.asa_log10deg = json_optional(j, "asa_log10deg", line_no);
        r.zsa_log10deg = json_optional(j, "zsa_log10deg", line_no);
        r.bc90_hz = json_number(j, "bc90_hz", line_no);
    }
    check_record(r, line_no);
    return r;
}

std::vector<Record> read_records(std::istream &in, Format format)
{
    std::vector<Record> out;
    std::string line;
    std::size_t line_no = 0;
    if (format == Format::Csv)
    {
        if (!std::getline(in, line))
            throw SchemaError(1, "empty file, expected header");
        ++line_no;
        if (trim_cr(line) != kCsvHeader)
            throw SchemaError(1, "header must be exactly '" + std::string(kCsvHeader) + "'");
    }
    while (std::getline(in, line))
    {
        ++line_no;
        const auto view = trim_cr(line);
        if (view.empty())
            continue;
        out.push_back(format == Format::Csv ? parse_csv_line(view, line_no) : parse_jsonl_line(view, line_no));
    }
    return out;
}

Format detect_format(std::string_view path, std::string_view head)
{
    auto ends_with = [&](std::string_view suffix) {
        return path.size() >= suffix.size() && path.substr(path.size() - suffix.size()) == suffix;
    };
    if (ends_with(".jsonl") || ends_with(".json") || ends_with(".ndjson"))
        return Format::Jsonl;
    if (ends_with(".csv"))
        return Format::Csv;
    for (char c : head)
    {
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n')
            continue;
        return c == '{' ? Format::Jsonl : Format::Csv;
    }
    return Format::Csv;
}

// ---- Parameter tables -------------------------------------------------------------

void write_table_row(std::ostream &out, Band band, ChannelState state, const ParamTable &t)
{
    out << band_label(band) << ',' << state_label(state) << ',' << format_number(t.pl0_db) << ','
        << format_number(t.ple) << ',' << format_number(t.sigma_s_db) << ',' << format_number(t.ds.mu) << ','
        << format_number(t.ds.sigma) << ',' << format_number(t.bc50_hz) << ',' << format_number(t.bc90_hz);
    auto moments = [&](const std::optional<LogMoments> &m) {
        if (m)
            out << ',' << format_number(m->mu) << ',' << format_number(m->sigma);
        else
            out << ",,";
    };
    moments(t.asa);
    moments(t.zsa);
    out << '\n';
}

std::vector<TableRow> read_table_rows(std::istream &in)
{
    std::vector<TableRow> rows;
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line) || trim_cr(line) != kTableHeader)
        throw SchemaError(1, "table header must be exactly '" + std::string(kTableHeader) + "'");
    while (std::getline(in, line))
    {
        ++line_no;
        const auto view = trim_cr(line);
        if (view.empty())
            break;
        const auto f = split(view, ',');
        if (f.size() != 13)
            throw SchemaError(line_no, "expected 13 fields, found " + std::to_string(f.size()));
        TableRow row{parse_band_field(f[0], line_no), parse_state_field(f[1], line_no), {}};
        ParamTable &t = row.table;
        t.pl0_db = parse_double(f[2], line_no, "pl0_db");
        t.ple = parse_double(f[3], line_no, "ple");
        t.sigma_s_db = parse_double(f[4], line_no, "sigma_s_db");
        t.ds = {parse_double(f[5], line_no, "ds_mu"), parse_double(f[6], line_no, "ds_sigma")};
        t.bc50_hz = parse_double(f[7], line_no, "bc50_hz");
        t.bc90_hz = parse_double(f[8], line_no, "bc90_hz");
        auto moments = [&](std::size_t i, const char *name) -> std::optional<LogMoments> {
            if (f[i].empty() && f[i + 1].empty())
                return std::nullopt;
            return LogMoments{parse_double(f[i], line_no, name), parse_double(f[i + 1], line_no, name)};
        };
        t.asa = moments(9, "asa");
        t.zsa = moments(11, "zsa");
        rows.push_back(std::move(row));
    }
    return rows;
}

void apply_table_override(ModelRegistry &registry, std::istream &in)
{
    for (auto &row : read_table_rows(in))
        registry.set_table(row.band, row.state, std::move(row.table));
}

} // namespace fr3
