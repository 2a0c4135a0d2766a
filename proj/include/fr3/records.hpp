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

#ifndef FR3_RECORDS_HPP
#define FR3_RECORDS_HPP

// Record wire format, one row per (drop, band):
//
//   drop_id,band_ghz,state,d_m,pl_db,sf_db,ds_log10s,asa_log10deg,zsa_log10deg,bc90_hz
//
// Numbers carry 6 significant digits; absent angular values and unknown SF are empty (CSV) or
// omitted (JSON-lines). JSON-lines uses the same field names.

#include "fr3/lsp_gen.hpp"
#include "fr3/model_params.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fr3
{

inline constexpr std::string_view kCsvHeader =
    "drop_id,band_ghz,state,d_m,pl_db,sf_db,ds_log10s,asa_log10deg,zsa_log10deg,bc90_hz";

struct Record
{
    std::uint64_t drop_id = 0;
    Band band = Band::B6_9;
    ChannelState state = ChannelState::LOS;
    double d_m = 0.0;
    double pl_db = 0.0;
    double sf_db = 0.0; // NaN for raw measurements (unknown)
    double ds_log10s = 0.0;
    std::optional<double> asa_log10deg;
    std::optional<double> zsa_log10deg;
    double bc90_hz = 0.0;

    bool operator==(const Record &) const = default;
};

enum class Format
{
    Csv,
    Jsonl
};

std::optional<Format> parse_format(std::string_view text);

// "%.6g"
std::string format_number(double value);

// The value a number has after a write/parse cycle.
double round_trip(double value);

std::vector<Record> flatten(const DropRecord &drop);

// Streams records; writes the CSV header on construction.
class RecordWriter
{
public:
    RecordWriter(std::ostream &out, Format format);

    void write(const Record &record);
    void write(const DropRecord &drop);

private:
    std::ostream &out_;
    Format format_;
};

// Parses a record file. JSON-lines input may also use the raw-measurement variant
// (see parse_jsonl_line). Throws SchemaError naming the 1-based line.
std::vector<Record> read_records(std::istream &in, Format format);

// Format from a file name (.jsonl / .json), falling back to sniffing the first
// non-blank character of the content.
Format detect_format(std::string_view path, std::string_view head);

// One JSON-lines record. Accepts the record schema or the raw-measurement variant:
//
//   {"drop_id":7,"band_ghz":"14.5","state":"NLOS","d_m":12.5,"tx_power_dbm":0,
//    "pdp":{"noise_floor_db":-110,"taps":[[0,-60.1],[2.5e-9,-71.0]]},
//    "beams":[{"azimuth_deg":0,"zenith_deg":90,"power":1.2e-7}]}
//
// For the raw variant the PDP is thresholded, DS comes from its rms delay spread,
// beams become taps at their boresight for ASA/ZSA, and path loss is tx power minus
// received power (thresholded PDP sum, else beam sum). "pl_db" may be given directly.
Record parse_jsonl_line(std::string_view line, std::size_t line_no);

// Parameter-table block as written by `tables` (also the override format):
//   band_ghz,state,pl0_db,ple,sigma_s_db,ds_mu,ds_sigma,bc50_hz,bc90_hz,asa_mu,asa_sigma,zsa_mu,zsa_sigma
inline constexpr std::string_view kTableHeader =
    "band_ghz,state,pl0_db,ple,sigma_s_db,ds_mu,ds_sigma,bc50_hz,bc90_hz,asa_mu,asa_sigma,zsa_mu,zsa_sigma";

void write_table_row(std::ostream &out, Band band, ChannelState state, const ParamTable &table);

struct TableRow
{
    Band band;
    ChannelState state;
    ParamTable table;
};

// Reads rows up to the first blank line or end of input.
std::vector<TableRow> read_table_rows(std::istream &in);

// Replaces the registry's tables with the rows of an override file.
void apply_table_override(ModelRegistry &registry, std::istream &in);

} // namespace fr3

#endif
