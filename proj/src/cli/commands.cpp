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

#include "fr3/error.hpp"
#include "fr3/estimator.hpp"
#include "fr3/lsp_gen.hpp"
#include "fr3/model_params.hpp"
#include "fr3/propagation.hpp"
#include "fr3/records.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

namespace fr3::cli
{

namespace
{

struct IoError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

// Output sink: the named file, or the caller's stream when the path is empty.
class Output
{
public:
    Output(const std::string &path, std::ostream &fallback)
    {
        if (path.empty() || path == "-")
        {
            os_ = &fallback;
            return;
        }
        file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
        if (!*file_)
            throw IoError("cannot open '" + path + "' for writing");
        os_ = file_.get();
        path_ = path;
    }

    std::ostream &stream() { return *os_; }

    void finish()
    {
        os_->flush();
        if (!*os_)
            throw IoError("write failed" + (path_.empty() ? std::string() : " on '" + path_ + "'"));
    }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream *os_ = nullptr;
    std::string path_;
};

std::string slurp(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<Record> load_records(const std::string &path)
{
    const std::string content = slurp(path);
    std::istringstream in(content);
    return read_records(in, detect_format(path, std::string_view(content).substr(0, 256)));
}

ModelRegistry load_registry(const std::string &override_path)
{
    ModelRegistry reg = ModelRegistry::builtin();
    if (!override_path.empty())
    {
        std::istringstream in(slurp(override_path));
        apply_table_override(reg, in);
    }
    return reg;
}

Band to_band(const std::string &s)
{
    const auto b = parse_band(s);
    if (!b)
        throw ConfigError("unknown band '" + s + "' (expected 6.9, 8.3 or 14.5)");
    return *b;
}

ChannelState to_state(const std::string &s)
{
    const auto st = parse_state(s);
    if (!st)
        throw ConfigError("unknown state '" + s + "' (expected LOS or NLOS)");
    return *st;
}

std::string group_name(Band b, ChannelState s)
{
    return std::string(band_label(b)) + " GHz " + std::string(state_label(s));
}

std::string num(double v) { return format_number(v); }

// Columns of the fit output for the full 4x4 correlation matrix.
const std::vector<std::pair<std::string, std::string>> kCorrPairs{
    {"SF", "DS"}, {"SF", "ASA"}, {"SF", "ZSA"}, {"DS", "ASA"}, {"DS", "ZSA"}, {"ASA", "ZSA"}};

std::optional<double> corr_entry(const GroupFit &g, const std::string &a, const std::string &b)
{
    const auto ia = std::find(g.corr_labels.begin(), g.corr_labels.end(), a);
    const auto ib = std::find(g.corr_labels.begin(), g.corr_labels.end(), b);
    if (ia == g.corr_labels.end() || ib == g.corr_labels.end())
        return std::nullopt;
    return g.corr(ia - g.corr_labels.begin(), ib - g.corr_labels.begin());
}

// ---- tables -----------------------------------------------------------------------

struct TablesOpts
{
    std::string band;
    std::string state;
    std::string output;
};

int cmd_tables(const TablesOpts &o, std::ostream &out)
{
    std::vector<Band> bands(kAllBands.begin(), kAllBands.end());
    std::vector<ChannelState> states(kAllStates.begin(), kAllStates.end());
    if (!o.band.empty())
        bands = {to_band(o.band)};
    if (!o.state.empty())
        states = {to_state(o.state)};

    Output sink(o.output, out);
    std::ostream &os = sink.stream();
    os << kTableHeader << '\n';
    for (Band b : bands)
        for (ChannelState s : states)
            write_table_row(os, b, s, builtin_table(b, s));

    os << "\nmatrix,band_ghz,state,row,col,value\n";
    for (Band b : bands)
        for (ChannelState s : states)
        {
            const CorrelationMatrix c = cross_corr_matrix(b, s);
            for (std::size_t i = 0; i < c.size(); ++i)
                for (std::size_t j = i + 1; j < c.size(); ++j)
                    os << "lsp," << band_label(b) << ',' << state_label(s) << ',' << c.labels()[i] << ','
                       << c.labels()[j] << ',' << num(c(i, j)) << '\n';
        }
    for (InterFreqParam p : {InterFreqParam::DS, InterFreqParam::SF})
        for (ChannelState s : states)
        {
            const CorrelationMatrix c = interfreq_corr_matrix(p, s);
            for (std::size_t i = 0; i < c.size(); ++i)
                for (std::size_t j = i + 1; j < c.size(); ++j)
                {
                    const bool involved = std::any_of(bands.begin(), bands.end(), [&](Band b) {
                        return band_label(b) == c.labels()[i] || band_label(b) == c.labels()[j];
                    });
                    if (!involved)
                        continue;
                    os << "interfreq_" << (p == InterFreqParam::DS ? "DS" : "SF") << ",," << state_label(s) << ','
                       << c.labels()[i] << ',' << c.labels()[j] << ',' << num(c(i, j)) << '\n';
                }
        }
    sink.finish();
    return kOk;
}

// ---- generate ---------------------------------------------------------------------

struct GenerateOpts
{
    std::vector<std::string> bands{"6.9", "8.3", "14.5"};
    std::string state = "LOS";
    std::uint64_t drops = 1;
    std::uint64_t seed = 0;
    double dmin = 1.0;
    double dmax = 50.0;
    bool zsa_mixture = false;
    double sigma_min = kDefaultSigmaMinDb;
    double asa_zsa_interfreq = 0.0;
    std::string nlos_shadow = "table";
    double nlos_sigma_coeff = 6.5;
    bool no_two_slope = false;
    unsigned workers = 1;
    std::string cross_terms = "product";
    std::string table_override;
    std::string output;
    std::string format = "csv";
};

GeneratorConfig to_config(const GenerateOpts &o)
{
    GeneratorConfig c;
    c.bands.clear();
    for (const auto &b : o.bands)
        c.bands.push_back(to_band(b));
    c.state = to_state(o.state);
    c.n_drops = o.drops;
    c.seed = o.seed;
    c.d_min_m = o.dmin;
    c.d_max_m = o.dmax;
    c.zsa_mixture_enabled = o.zsa_mixture;
    c.sigma_min_db = o.sigma_min;
    c.asa_zsa_interfreq_corr = o.asa_zsa_interfreq;
    if (o.nlos_shadow == "table")
        c.nlos_shadow = NlosShadow::Table;
    else if (o.nlos_shadow == "distance")
        c.nlos_shadow = NlosShadow::DistanceScaled;
    else
        throw ConfigError("--nlos-shadow must be 'table' or 'distance'");
    c.nlos_sigma_coeff_db = o.nlos_sigma_coeff;
    c.two_slope = !o.no_two_slope;
    c.workers = o.workers;
    if (o.cross_terms == "product")
        c.cross_terms = CrossTermRule::Product;
    else if (o.cross_terms == "zero")
        c.cross_terms = CrossTermRule::Zero;
    else
        throw ConfigError("--cross-terms must be 'product' or 'zero'");
    c.validate();
    return c;
}

int cmd_generate(const GenerateOpts &o, std::ostream &out)
{
    const GeneratorConfig config = to_config(o);
    const auto format = parse_format(o.format);
    if (!format)
        throw ConfigError("--format must be 'csv' or 'jsonl'");
    const ModelRegistry registry = load_registry(o.table_override);
    const DropGenerator gen(config, registry);

    Output sink(o.output, out);
    RecordWriter writer(sink.stream(), *format);
    gen.generate([&](const DropRecord &d) { writer.write(d); });
    sink.finish();
    return kOk;
}

// ---- fit --------------------------------------------------------------------------

struct FitOpts
{
    std::string input;
    std::string output;
    std::string interfreq_output;
};

void write_fit(std::ostream &os, const FitReport &report)
{
    os << "band_ghz,state,n,pl0_db,ple,sigma_s_db,sigma_coeff_db,ds_mu,ds_sigma,asa_mu,asa_sigma,zsa_mu,zsa_sigma";
    for (const auto &[a, b] : kCorrPairs)
        os << ",r_" << a << '_' << b;
    os << '\n';
    auto opt = [](const std::optional<double> &v) { return v ? num(*v) : std::string(); };
    for (const auto &g : report.groups)
    {
        os << band_label(g.band) << ',' << state_label(g.state) << ',' << g.path_loss.n << ','
           << num(g.path_loss.pl0_db) << ',' << num(g.path_loss.ple) << ',' << num(g.path_loss.sigma_s_db) << ','
           << opt(g.distance_sigma_db) << ',' << num(g.ds.mu) << ',' << num(g.ds.sigma) << ','
           << opt(g.asa ? std::optional(g.asa->mu) : std::nullopt) << ','
           << opt(g.asa ? std::optional(g.asa->sigma) : std::nullopt) << ','
           << opt(g.zsa ? std::optional(g.zsa->mu) : std::nullopt) << ','
           << opt(g.zsa ? std::optional(g.zsa->sigma) : std::nullopt);
        for (const auto &[a, b] : kCorrPairs)
            os << ',' << opt(corr_entry(g, a, b));
        os << '\n';
    }
}

void write_interfreq(std::ostream &os, const FitReport &report)
{
    os << "state,lsp,band_a_ghz,band_b_ghz,n,r\n";
    for (const auto &f : report.interfreq)
        os << state_label(f.state) << ',' << lsp_label(f.lsp) << ',' << band_label(f.band_a) << ','
           << band_label(f.band_b) << ',' << f.n << ',' << num(f.r) << '\n';
}

int cmd_fit(const FitOpts &o, std::ostream &out, std::ostream &err)
{
    const auto records = load_records(o.input);
    const FitReport report = fit_records(records);
    for (const auto &w : report.warnings)
        err << "warning: " << w << '\n';

    Output sink(o.output, out);
    write_fit(sink.stream(), report);
    sink.finish();
    if (!o.interfreq_output.empty())
    {
        Output isink(o.interfreq_output, out);
        write_interfreq(isink.stream(), report);
        isink.finish();
    }
    return kOk;
}

// ---- validate ---------------------------------------------------------------------

struct ValidateOpts
{
    std::string table_override;
    std::uint64_t seed = 1;
    std::uint64_t drops = 10000;
    unsigned workers = 1;
    bool skip_roundtrip = false;
};

inline constexpr double kRtPl0Db = 1.0;
inline constexpr double kRtPle = 0.10;
inline constexpr double kRtSigmaDb = 0.5;
inline constexpr double kRtMoment = 0.02;
inline constexpr double kRtCorr = 0.05;

class Reporter
{
public:
    explicit Reporter(std::ostream &os) : os_(os) {}

    void check(bool pass, const std::string &name, const std::string &detail)
    {
        os_ << (pass ? "PASS " : "FAIL ") << name << ": " << detail << '\n';
        ++total_;
        failed_ += pass ? 0 : 1;
    }

    int total() const { return total_; }
    int failed() const { return failed_; }

private:
    std::ostream &os_;
    int total_ = 0;
    int failed_ = 0;
};

// |got - want| <= tol, formatted as "label got (want +- tol)".
bool within(double got, double want, double tol, const std::string &label, std::string &detail)
{
    const bool ok = std::abs(got - want) <= tol;
    if (!detail.empty())
        detail += "; ";
    detail += label + " " + num(got) + " (" + num(want) + " +- " + num(tol) + ")";
    return ok;
}

void validate_tables(const ModelRegistry &reg, Reporter &rep)
{
    for (Band b : kAllBands)
        for (ChannelState s : kAllStates)
        {
            const ParamTable &t = reg.table(b, s);
            const std::string name = group_name(b, s);
            const auto findings = validate_table(t, b, s);
            for (const auto &f : findings)
                if (f.check == "structure")
                    rep.check(false, "structure " + name, f.message);
            const ConsistencyReport r = consistency_report(t, b, s);
            rep.check(r.bc50_relative_deviation <= kBcRelativeTolerance, "bc50 " + name,
                      "table " + num(t.bc50_hz) + " Hz, predicted " + num(r.bc50_predicted_hz) + " Hz, deviation " +
                          num(100.0 * r.bc50_relative_deviation) + "% (limit 10%)");
            rep.check(r.bc90_relative_deviation <= kBcRelativeTolerance, "bc90 " + name,
                      "table " + num(t.bc90_hz) + " Hz, predicted " + num(r.bc90_predicted_hz) + " Hz, deviation " +
                          num(100.0 * r.bc90_relative_deviation) + "% (limit 10%)");
            if (r.fspl_gap_db)
                rep.check(*r.fspl_gap_db <= kFsplInterceptToleranceDb, "fspl " + name,
                          "intercept " + num(t.pl0_db) + " dB, free space " +
                              num(fspl_db(center_frequency_hz(b), kReferenceDistanceM)) + " dB, gap " +
                              num(*r.fspl_gap_db) + " dB (limit 1 dB)");
        }
}

void validate_roundtrip(const ModelRegistry &reg, const ValidateOpts &o, Reporter &rep)
{
    for (ChannelState s : kAllStates)
    {
        GeneratorConfig c;
        c.state = s;
        c.n_drops = o.drops;
        c.seed = o.seed;
        c.two_slope = false; // the estimator fits a single slope
        c.workers = o.workers;
        const DropGenerator gen(c, reg);
        std::vector<Record> records;
        gen.generate([&](const DropRecord &d) {
            for (auto &r : flatten(d))
                records.push_back(r);
        });
        const FitReport fit = fit_records(records);

        for (const auto &g : fit.groups)
        {
            const ParamTable &t = reg.table(g.band, g.state);
            const std::string name = group_name(g.band, g.state);

            std::string d;
            bool ok = within(g.path_loss.pl0_db, t.pl0_db, kRtPl0Db, "pl0", d);
            ok &= within(g.path_loss.ple, t.ple, kRtPle, "ple", d);
            ok &= within(g.path_loss.sigma_s_db, t.sigma_s_db, kRtSigmaDb, "sigma_s", d);
            rep.check(ok, "roundtrip path loss " + name, d);

            d.clear();
            ok = within(g.ds.mu, t.ds.mu, kRtMoment, "ds_mu", d);
            ok &= within(g.ds.sigma, t.ds.sigma, kRtMoment, "ds_sigma", d);
            if (t.asa && g.asa)
            {
                ok &= within(g.asa->mu, t.asa->mu, kRtMoment, "asa_mu", d);
                ok &= within(g.asa->sigma, t.asa->sigma, kRtMoment, "asa_sigma", d);
                ok &= within(g.zsa->mu, t.zsa->mu, kRtMoment, "zsa_mu", d);
                ok &= within(g.zsa->sigma, t.zsa->sigma, kRtMoment, "zsa_sigma", d);
            }
            else if (t.asa.has_value() != g.asa.has_value())
            {
                ok = false;
                d += "; angular presence mismatch";
            }
            rep.check(ok, "roundtrip moments " + name, d);

            d.clear();
            ok = true;
            const CorrelationMatrix &want = reg.cross_corr(g.band, g.state);
            for (const auto &[a, b] : kCorrPairs)
            {
                const auto got = corr_entry(g, a, b);
                const auto ia = want.index_of(a);
                const auto ib = want.index_of(b);
                if (!got || !ia || !ib)
                    continue;
                ok &= within(*got, want(*ia, *ib), kRtCorr, a + "-" + b, d);
            }
            rep.check(ok, "roundtrip correlations " + name, d);
        }

        for (InterFreqParam p : {InterFreqParam::DS, InterFreqParam::SF})
        {
            const Lsp lsp = p == InterFreqParam::DS ? Lsp::DS : Lsp::SF;
            const CorrelationMatrix &want = reg.interfreq(p, s);
            std::string d;
            bool ok = true;
            for (const auto &f : fit.interfreq)
                if (f.lsp == lsp && f.state == s)
                    ok &= within(f.r, want.at(band_label(f.band_a), band_label(f.band_b)), kRtCorr,
                                 std::string(band_label(f.band_a)) + "-" + std::string(band_label(f.band_b)), d);
            rep.check(ok, "roundtrip interfreq " + std::string(lsp_label(lsp)) + " " + std::string(state_label(s)), d);
        }
    }
}

void validate_two_slope(const ModelRegistry &reg, const ValidateOpts &o, Reporter &rep)
{
    for (Band b : kAllBands)
    {
        GeneratorConfig c;
        c.bands = {b};
        c.state = ChannelState::NLOS;
        c.n_drops = o.drops;
        c.seed = o.seed;
        c.workers = o.workers;
        const DropGenerator gen(c, reg);
        const PathLossModel los = PathLossModel::from_table(reg.table(b, ChannelState::LOS));
        std::uint64_t violations = 0;
        gen.generate([&](const DropRecord &d) {
            const double floor = path_loss_db(los, d.distance_m);
            if (d.bands.front().pl_db - d.bands.front().lsp.sf_db < floor - 1e-9)
                ++violations;
        });
        rep.check(violations == 0, "two-slope floor " + std::string(band_label(b)) + " GHz NLOS",
                  std::to_string(violations) + " of " + std::to_string(o.drops) + " drops below the LOS curve");
    }
}

int cmd_validate(const ValidateOpts &o, std::ostream &out)
{
    if (o.drops < kMinGroupSamples)
        throw ConfigError("--drops must be at least 3");
    const ModelRegistry reg = load_registry(o.table_override);
    Reporter rep(out);
    validate_tables(reg, rep);
    if (!o.skip_roundtrip)
    {
        validate_roundtrip(reg, o, rep);
        validate_two_slope(reg, o, rep);
    }
    out << (rep.failed() == 0 ? "OK " : "FAILED ") << rep.total() - rep.failed() << '/' << rep.total()
        << " checks passed\n";
    return rep.failed() == 0 ? kOk : kValidationFail;
}

// ---- plotdata ---------------------------------------------------------------------

struct PlotOpts
{
    std::string input;
    std::string kind;
    std::string band;
    std::string state;
    std::string output;
};

inline constexpr int kModelLinePoints = 50;

int cmd_plotdata(const PlotOpts &o, std::ostream &out)
{
    static const std::vector<std::string> kinds{"pl_vs_d", "sf_qq", "ds_qq", "asa_qq", "zsa_qq", "spread_vs_d"};
    if (std::find(kinds.begin(), kinds.end(), o.kind) == kinds.end())
        throw ConfigError("unknown plot kind '" + o.kind + "'");
    const std::optional<Band> band = o.band.empty() ? std::nullopt : std::optional(to_band(o.band));
    const std::optional<ChannelState> state = o.state.empty() ? std::nullopt : std::optional(to_state(o.state));

    std::vector<Record> rows;
    for (const auto &r : load_records(o.input))
        if ((!band || r.band == *band) && (!state || r.state == *state))
            rows.push_back(r);
    if (rows.empty())
        throw ConfigError("no records match the band/state filter");
    for (const auto &r : rows)
        if (r.band != rows.front().band || r.state != rows.front().state)
            throw ConfigError("input mixes (band, state) groups; select one with --band and --state");

    std::vector<double> d, pl;
    for (const auto &r : rows)
    {
        d.push_back(r.d_m);
        pl.push_back(r.pl_db);
    }

    Output sink(o.output, out);
    std::ostream &os = sink.stream();
    auto qq = [&](const std::vector<double> &values, const char *name) {
        os << "theoretical_quantile," << name << '\n';
        for (const auto &p : probability_plot_points(values))
            os << num(p.theoretical_quantile) << ',' << num(p.ordered_value) << '\n';
    };

    if (o.kind == "pl_vs_d")
    {
        const FitResult fit = fit_path_loss(d, pl);
        os << "d_m,pl_db\n";
        for (std::size_t i = 0; i < d.size(); ++i)
            os << num(d[i]) << ',' << num(pl[i]) << '\n';
        const auto [lo, hi] = std::minmax_element(d.begin(), d.end());
        const PathLossModel model(fit.pl0_db, fit.ple);
        os << "\nd_m,pl_model_db\n";
        for (int k = 0; k < kModelLinePoints; ++k)
        {
            const double dk = *lo * std::pow(*hi / *lo, static_cast<double>(k) / (kModelLinePoints - 1));
            os << num(dk) << ',' << num(path_loss_db(model, dk)) << '\n';
        }
    }
    else if (o.kind == "sf_qq")
    {
        std::vector<double> sf;
        const bool have_sf = std::all_of(rows.begin(), rows.end(), [](const Record &r) { return std::isfinite(r.sf_db); });
        if (have_sf)
            for (const auto &r : rows)
                sf.push_back(r.sf_db);
        else
            sf = fit_path_loss(d, pl).residuals_db;
        qq(sf, "sf_db");
    }
    else if (o.kind == "ds_qq")
    {
        std::vector<double> v;
        for (const auto &r : rows)
            v.push_back(r.ds_log10s);
        qq(v, "ds_log10s");
    }
    else if (o.kind == "asa_qq" || o.kind == "zsa_qq")
    {
        const bool asa = o.kind == "asa_qq";
        std::vector<double> v;
        for (const auto &r : rows)
        {
            const auto &x = asa ? r.asa_log10deg : r.zsa_log10deg;
            if (!x)
                throw ConfigError("records carry no angular spreads (6.9 GHz is omni-only)");
            v.push_back(*x);
        }
        qq(v, asa ? "asa_log10deg" : "zsa_log10deg");
    }
    else
    {
        os << "d_m,ds_log10s\n";
        for (const auto &r : rows)
            os << num(r.d_m) << ',' << num(r.ds_log10s) << '\n';
    }
    sink.finish();
    return kOk;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Large-scale indoor-office channel model for the 6.9 / 8.3 / 14.5 GHz bands", "fr3chan"};
    app.set_config("--config", "", "TOML/INI file mirroring the flags (command-line flags win)");
    app.require_subcommand(1);

    TablesOpts tables;
    auto *t = app.add_subcommand("tables", "Print the built-in parameter tables and correlation matrices");
    t->add_option("--band", tables.band, "Only this band (6.9, 8.3, 14.5)");
    t->add_option("--state", tables.state, "Only this state (LOS, NLOS)");
    t->add_option("-o,--output", tables.output, "Output file (default stdout)");

    GenerateOpts gen;
    auto *g = app.add_subcommand("generate", "Generate drops with correlated large-scale parameters");
    g->add_option("--bands", gen.bands, "Comma-separated bands")->delimiter(',')->capture_default_str();
    g->add_option("--state", gen.state, "LOS or NLOS")->capture_default_str();
    g->add_option("--drops", gen.drops, "Number of drops")->capture_default_str();
    g->add_option("--seed", gen.seed, "Random seed")->required();
    g->add_option("--dmin", gen.dmin, "Minimum distance [m]")->capture_default_str();
    g->add_option("--dmax", gen.dmax, "Maximum distance [m]")->capture_default_str();
    g->add_flag("--zsa-mixture", gen.zsa_mixture, "Two-mode ZSA where it matches the table");
    g->add_option("--sigma-min", gen.sigma_min, "Floor of the distance-scaled shadow sigma [dB]")
        ->capture_default_str();
    g->add_option("--asa-zsa-interfreq", gen.asa_zsa_interfreq, "Cross-band ASA/ZSA correlation")
        ->capture_default_str();
    g->add_option("--nlos-shadow", gen.nlos_shadow, "NLOS shadow sigma: table | distance")->capture_default_str();
    g->add_option("--nlos-sigma-coeff", gen.nlos_sigma_coeff, "Distance-scaled sigma coefficient [dB/decade]")
        ->capture_default_str();
    g->add_flag("--no-two-slope", gen.no_two_slope, "Plain NLOS path loss (no LOS floor)");
    g->add_option("--workers", gen.workers, "Worker threads")->capture_default_str();
    g->add_option("--cross-terms", gen.cross_terms, "Cross-band cross-LSP entries: product | zero")
        ->capture_default_str();
    g->add_option("--table-override", gen.table_override, "Parameter-table CSV replacing built-in rows");
    g->add_option("-o,--output", gen.output, "Output file (default stdout)");
    g->add_option("--format", gen.format, "csv | jsonl")->capture_default_str();

    FitOpts fit;
    auto *f = app.add_subcommand("fit", "Fit model coefficients to a record file");
    f->add_option("-i,--input", fit.input, "Record file (CSV or JSON-lines)")->required();
    f->add_option("-o,--output", fit.output, "Output file (default stdout)");
    f->add_option("--interfreq-output", fit.interfreq_output, "Also write inter-band correlations here");

    ValidateOpts val;
    auto *v = app.add_subcommand("validate", "Check table consistency and the generate/fit round trip");
    v->add_option("--table-override", val.table_override, "Parameter-table CSV replacing built-in rows");
    v->add_option("--seed", val.seed, "Seed for the round trip")->capture_default_str();
    v->add_option("--drops", val.drops, "Drops per round trip")->capture_default_str();
    v->add_option("--workers", val.workers, "Worker threads")->capture_default_str();
    v->add_flag("--tables-only", val.skip_roundtrip, "Skip the statistical round trip");

    PlotOpts plot;
    auto *p = app.add_subcommand("plotdata", "Emit two-column CSV for plotting");
    p->add_option("-i,--input", plot.input, "Record file")->required();
    p->add_option("--kind", plot.kind, "pl_vs_d | sf_qq | ds_qq | asa_qq | zsa_qq | spread_vs_d")->required();
    p->add_option("--band", plot.band, "Band filter");
    p->add_option("--state", plot.state, "State filter");
    p->add_option("-o,--output", plot.output, "Output file (default stdout)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try
    {
        app.parse(reversed);
    }
    catch (const CLI::CallForHelp &)
    {
        out << app.help();
        return kOk;
    }
    catch (const CLI::CallForAllHelp &)
    {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    }
    catch (const CLI::ParseError &e)
    {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    try
    {
        if (*t)
            return cmd_tables(tables, out);
        if (*g)
            return cmd_generate(gen, out);
        if (*f)
            return cmd_fit(fit, out, err);
        if (*v)
            return cmd_validate(val, out);
        if (*p)
            return cmd_plotdata(plot, out);
    }
    catch (const IoError &e)
    {
        err << "error: " << e.what() << '\n';
        return kIo;
    }
    catch (const SchemaError &e)
    {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    catch (const std::invalid_argument &e) // DomainError, ConfigError
    {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    catch (const std::runtime_error &e)
    {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

} // namespace fr3::cli
