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

#include "fr3/cli.hpp"
#include "fr3/records.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

using fr3::cli::run;

namespace
{

struct Result
{
    int code;
    std::string out;
    std::string err;
};

Result cli(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string &s)
{
    std::vector<std::string> v;
    std::istringstream is(s);
    for (std::string l; std::getline(is, l);)
        v.push_back(l);
    return v;
}

std::vector<std::string> fields(const std::string &line)
{
    std::vector<std::string> v;
    std::istringstream is(line);
    for (std::string f; std::getline(is, f, ',');)
        v.push_back(f);
    if (!line.empty() && line.back() == ',')
        v.emplace_back();
    return v;
}

// Row of a CSV body whose first two fields match.
std::vector<std::string> row(const std::string &csv, const std::string &a, const std::string &b)
{
    for (const auto &l : lines(csv))
    {
        const auto f = fields(l);
        if (f.size() >= 2 && f[0] == a && f[1] == b)
            return f;
    }
    return {};
}

} // namespace

TEST_CASE("usage errors")
{
    CHECK(cli({}).code == 1);
    CHECK(cli({"bogus"}).code == 1);
    CHECK(cli({"generate"}).code == 1); // --seed is required
    CHECK(cli({"generate", "--seed", "1", "--state", "MIXED"}).code == 1);
    CHECK(cli({"generate", "--seed", "1", "--bands", "7.0"}).code == 1);
    CHECK(cli({"generate", "--seed", "1", "--format", "xml"}).code == 1);
    const auto h = cli({"--help"});
    CHECK(h.code == 0);
    CHECK(h.out.find("generate") != std::string::npos);
}

TEST_CASE("tables")
{
    const auto r = cli({"tables", "--band", "6.9", "--state", "LOS"});
    REQUIRE(r.code == 0);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() >= 4);
    CHECK(ls[0] == fr3::kTableHeader);
    CHECK(ls[1] == "6.9,LOS,48.3,1.5,2.9,-7.92,0.34,1.65e+07,1.7e+06,,,,");
    CHECK(ls[2].empty());
    CHECK(ls[3] == "matrix,band_ghz,state,row,col,value");
    CHECK(r.out.find("lsp,6.9,LOS,SF,DS,-0.72") != std::string::npos);
    CHECK(r.out.find("NLOS") == std::string::npos);

    const auto all = cli({"tables"});
    CHECK(all.out.find("14.5,NLOS,51.4,3.4,7.3,-7.59,0.22,7.8e+06,700000,1.77,0.15,1.03,0.07") != std::string::npos);
    CHECK(all.out.find("interfreq_SF,,NLOS,6.9,8.3,0.91") != std::string::npos);
    CHECK(all.out.find("interfreq_DS,,LOS,8.3,14.5,0.43") != std::string::npos);
    CHECK(cli({"tables", "--band", "9.9"}).code == 1);
}

TEST_CASE("generate: layout, determinism and config errors")
{
    oracle::TempDir tmp;
    const auto a = tmp.file("a.csv"), b = tmp.file("b.csv");
    REQUIRE(cli({"generate", "--bands", "6.9,14.5", "--state", "LOS", "--drops", "100", "--seed", "42", "-o", a}).code ==
            0);
    const auto ls = lines(oracle::read_file(a));
    REQUIRE(ls.size() == 201);
    CHECK(ls[0] == fr3::kCsvHeader);
    CHECK(fields(ls[1])[1] == "6.9");
    CHECK(fields(ls[2])[1] == "14.5");
    CHECK(fields(ls[1])[7].empty());
    CHECK(!fields(ls[2])[7].empty());

    REQUIRE(cli({"generate", "--bands", "6.9,14.5", "--state", "LOS", "--drops", "100", "--seed", "42", "--workers",
                 "3", "-o", b})
                .code == 0);
    CHECK(oracle::read_file(a) == oracle::read_file(b));
    CHECK(cli({"generate", "--bands", "6.9,14.5", "--drops", "100", "--seed", "43"}).out != oracle::read_file(a));

    const auto z = tmp.file("z.csv");
    const auto bad = cli({"generate", "--seed", "1", "--drops", "0", "-o", z});
    CHECK(bad.code == 1);
    CHECK(!bad.err.empty());
    CHECK(!std::filesystem::exists(z));
    CHECK(cli({"generate", "--seed", "1", "--dmin", "0.5"}).code == 1);
    CHECK(cli({"generate", "--seed", "1", "--dmin", "10", "--dmax", "5"}).code == 1);
    CHECK(cli({"generate", "--seed", "1", "--asa-zsa-interfreq", "2"}).code == 1);

    const auto j = cli({"generate", "--bands", "8.3", "--drops", "3", "--seed", "1", "--format", "jsonl"});
    REQUIRE(j.code == 0);
    CHECK(lines(j.out).size() == 3);
    CHECK(j.out.rfind("{\"drop_id\":0,", 0) == 0);
}

TEST_CASE("fit: recovers the NLOS exponent from generated records")
{
    oracle::TempDir tmp;
    const auto recs = tmp.file("n.csv"), fitted = tmp.file("fit.csv"), inter = tmp.file("if.csv");
    REQUIRE(cli({"generate", "--state", "NLOS", "--drops", "10000", "--seed", "8", "--no-two-slope", "-o", recs}).code ==
            0);
    const auto r = cli({"fit", "-i", recs, "-o", fitted, "--interfreq-output", inter});
    REQUIRE(r.code == 0);
    const std::string body = oracle::read_file(fitted);
    CHECK(lines(body)[0].rfind("band_ghz,state,n,pl0_db,ple,sigma_s_db", 0) == 0);
    const auto g = row(body, "6.9", "NLOS");
    REQUIRE(g.size() == 19);
    CHECK(g[2] == "10000");
    CHECK(std::abs(std::stod(g[4]) - 3.2) <= 0.05);
    CHECK(std::abs(std::stod(g[5]) - 6.6) <= 0.15);
    CHECK(g[9].empty()); // no angular moments at 6.9 GHz
    const auto g14 = row(body, "14.5", "NLOS");
    REQUIRE(g14.size() == 19);
    CHECK(std::abs(std::stod(g14[9]) - 1.77) <= 0.01);

    const auto ifr = row(oracle::read_file(inter), "NLOS", "SF");
    REQUIRE(ifr.size() == 6);
    CHECK(ifr[2] == "6.9");
    CHECK(ifr[3] == "8.3");
    CHECK(std::abs(std::stod(ifr[5]) - 0.91) <= 0.02);
}

TEST_CASE("fit: undersized groups, malformed and missing input")
{
    oracle::TempDir tmp;
    const auto one = tmp.file("one.csv");
    oracle::write_file(one, std::string(fr3::kCsvHeader) + "\n0,6.9,LOS,2,55,0,-7.9,,,1e6\n");
    const auto r = cli({"fit", "-i", one});
    CHECK(r.code == 0);
    CHECK(lines(r.out).size() == 1); // header only
    CHECK(r.err.find("warning") != std::string::npos);

    const auto bad = tmp.file("bad.csv");
    oracle::write_file(bad, "drop,band\n1,2\n");
    const auto b = cli({"fit", "-i", bad});
    CHECK(b.code == 1);
    CHECK(b.err.find("line 1") != std::string::npos);

    const auto row3 = tmp.file("row3.csv");
    oracle::write_file(row3, std::string(fr3::kCsvHeader) + "\n0,6.9,LOS,2,55,0,-7.9,,,1e6\n0,6.9,LOS,x,55,0,-7.9,,,1e6\n");
    const auto c = cli({"fit", "-i", row3});
    CHECK(c.code == 1);
    CHECK(c.err.find("line 3") != std::string::npos);

    CHECK(cli({"fit", "-i", tmp.file("missing.csv")}).code == 2);
    CHECK(cli({"tables", "-o", tmp.file("no/such/dir/t.csv")}).code == 2);
}

TEST_CASE("validate")
{
    oracle::TempDir tmp;
    // Built-in tables carry one bc90 entry outside 10%; report it and exit 3.
    const auto builtin = cli({"validate", "--tables-only"});
    CHECK(builtin.code == 3);
    CHECK(builtin.out.find("FAIL bc90 14.5 GHz NLOS") != std::string::npos);

    // Replace that entry with its predicted value: every table check passes.
    const auto fixed = tmp.file("fixed.csv");
    oracle::write_file(fixed, std::string(fr3::kTableHeader) +
                                  "\n14.5,NLOS,51.4,3.4,7.3,-7.59,0.22,7.8e+06,778090,1.77,0.15,1.03,0.07\n");
    const auto ok = cli({"validate", "--tables-only", "--table-override", fixed});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("OK ") != std::string::npos);

    const auto shifted = tmp.file("shifted.csv");
    oracle::write_file(shifted, std::string(fr3::kTableHeader) +
                                    "\n6.9,LOS,53.3,1.5,2.9,-7.92,0.34,1.65e+07,1.7e+06,,,,\n");
    const auto bad = cli({"validate", "--tables-only", "--table-override", shifted});
    CHECK(bad.code == 3);
    CHECK(bad.out.find("FAIL fspl 6.9 GHz LOS") != std::string::npos);

    CHECK(cli({"validate", "--table-override", tmp.file("nope.csv")}).code == 2);
}

TEST_CASE("plotdata")
{
    oracle::TempDir tmp;
    const auto recs = tmp.file("los.csv");
    REQUIRE(cli({"generate", "--bands", "6.9", "--state", "LOS", "--drops", "5000", "--seed", "3", "-o", recs}).code ==
            0);

    const auto pl = cli({"plotdata", "-i", recs, "--kind", "pl_vs_d"});
    REQUIRE(pl.code == 0);
    const auto ls = lines(pl.out);
    CHECK(ls[0] == "d_m,pl_db");
    std::size_t blank = 0;
    while (blank < ls.size() && !ls[blank].empty())
        ++blank;
    REQUIRE(blank == 5001);
    CHECK(ls[blank + 1] == "d_m,pl_model_db");
    REQUIRE(ls.size() == blank + 2 + 50);
    // Model line near 10 m: 48.3 + 15 = 63.3 dB.
    double best = 1e9, value = 0;
    for (std::size_t i = blank + 2; i < ls.size(); ++i)
    {
        const auto f = fields(ls[i]);
        const double d = std::stod(f[0]);
        if (std::abs(std::log10(d) - 1) < best)
        {
            best = std::abs(std::log10(d) - 1);
            value = std::stod(f[1]) - 15.0 * (std::log10(d) - 1);
        }
    }
    CHECK(std::abs(value - 63.3) < 0.3);

    const auto dq = cli({"plotdata", "-i", recs, "--kind", "ds_qq"});
    REQUIRE(dq.code == 0);
    const auto dl = lines(dq.out);
    CHECK(dl[0] == "theoretical_quantile,ds_log10s");
    CHECK(dl.size() == 5001);
    std::vector<double> q, v;
    for (std::size_t i = 1; i < dl.size(); ++i)
    {
        const auto f = fields(dl[i]);
        q.push_back(std::stod(f[0]));
        v.push_back(std::stod(f[1]));
    }
    // Slope of the probability plot is the log-domain spread.
    const double qm = oracle::mean(q), vm = oracle::mean(v);
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < q.size(); ++i)
    {
        sxy += (q[i] - qm) * (v[i] - vm);
        sxx += (q[i] - qm) * (q[i] - qm);
    }
    CHECK(std::abs(sxy / sxx - 0.34) < 0.02);

    CHECK(cli({"plotdata", "-i", recs, "--kind", "sf_qq"}).out.rfind("theoretical_quantile,sf_db", 0) == 0);
    CHECK(cli({"plotdata", "-i", recs, "--kind", "spread_vs_d"}).out.rfind("d_m,ds_log10s", 0) == 0);
    CHECK(cli({"plotdata", "-i", recs, "--kind", "histogram"}).code == 1);
    // 6.9 GHz has no angular data.
    CHECK(cli({"plotdata", "-i", recs, "--kind", "asa_qq"}).code == 1);

    const auto both = tmp.file("both.csv");
    REQUIRE(cli({"generate", "--bands", "6.9,8.3", "--drops", "50", "--seed", "3", "-o", both}).code == 0);
    CHECK(cli({"plotdata", "-i", both, "--kind", "ds_qq"}).code == 1);
    CHECK(cli({"plotdata", "-i", both, "--kind", "asa_qq", "--band", "8.3"}).code == 0);
}

TEST_CASE("options from a config file")
{
    oracle::TempDir tmp;
    const auto cfg = tmp.file("gen.ini"), a = tmp.file("a.csv"), b = tmp.file("b.csv");
    oracle::write_file(cfg, "[generate]\nbands=8.3\nstate=NLOS\ndrops=20\nseed=5\n");
    REQUIRE(cli({"--config", cfg, "generate", "-o", a}).code == 0);
    REQUIRE(cli({"generate", "--bands", "8.3", "--state", "NLOS", "--drops", "20", "--seed", "5", "-o", b}).code == 0);
    CHECK(oracle::read_file(a) == oracle::read_file(b));
    CHECK(lines(oracle::read_file(a)).size() == 21);
    CHECK(cli({"--config", tmp.file("missing.ini"), "tables"}).code != 0);
}
