#include "late/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "late/errors.hpp"

namespace late {

std::string canonical_dump(const json& j) { return j.dump(2) + "\n"; }

std::string config_hash(const std::string& text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[17];
    static const char* hex = "0123456789abcdef";
    for (int i = 15; i >= 0; --i) {
        buf[i] = hex[h & 0xf];
        h >>= 4;
    }
    buf[16] = '\0';
    return std::string(buf);
}

namespace {

json atoms_to_json(const DiscreteDist& dist) {
    json arr = json::array();
    for (const Atom& atom : dist.atoms()) arr.push_back({atom.location, atom.mass});
    return arr;
}

DiscreteDist atoms_from_json(const json& arr, const std::string& field) {
    if (!arr.is_array() || arr.empty())
        throw ParseError("field '" + field + "' must be a nonempty array of [location, mass]");
    std::vector<Atom> atoms;
    for (const json& entry : arr) {
        if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
            !entry[1].is_number())
            throw ParseError("field '" + field + "' entries must be [location, mass] pairs");
        atoms.push_back({entry[0].get<double>(), entry[1].get<double>()});
    }
    try {
        return DiscreteDist::from_atoms(std::move(atoms));
    } catch (const InvalidDistribution& e) {
        throw ParseError("field '" + field + "': " + e.what());
    }
}

double number_field(const json& doc, const std::string& field) {
    if (!doc.contains(field) || !doc[field].is_number())
        throw ParseError("missing or non-numeric field '" + field + "'");
    return doc[field].get<double>();
}

}  // namespace

json theta_to_json(const Theta& theta) {
    json doc;
    doc["schema"] = kDgpSchema;
    doc["kind"] = "continuous";
    doc["a"] = theta.a;
    doc["b"] = theta.b;
    doc["c"] = theta.c;
    doc["pz"] = theta.pz;
    doc["M"] = theta.M;
    doc["f11"] = atoms_to_json(theta.f11);
    doc["f10"] = atoms_to_json(theta.f10);
    doc["f01"] = atoms_to_json(theta.f01);
    doc["f00"] = atoms_to_json(theta.f00);
    doc["g11"] = atoms_to_json(theta.g11);
    doc["g10"] = atoms_to_json(theta.g10);
    doc["g01"] = atoms_to_json(theta.g01);
    doc["g00"] = atoms_to_json(theta.g00);
    return doc;
}

json binary_theta_to_json(const BinaryTheta& theta) {
    json doc;
    doc["schema"] = kDgpSchema;
    doc["kind"] = "binary";
    doc["a"] = theta.a;
    doc["b"] = theta.b;
    doc["c"] = theta.c;
    doc["pz"] = theta.pz;
    doc["r11"] = theta.r11;
    doc["r10"] = theta.r10;
    doc["r01"] = theta.r01;
    doc["r00"] = theta.r00;
    doc["t11"] = theta.t11;
    doc["t10"] = theta.t10;
    doc["t01"] = theta.t01;
    doc["t00"] = theta.t00;
    return doc;
}

json dgp_to_json(const Dgp& dgp) {
    if (std::holds_alternative<Theta>(dgp)) return theta_to_json(std::get<Theta>(dgp));
    return binary_theta_to_json(std::get<BinaryTheta>(dgp));
}

Dgp dgp_from_json(const json& doc) {
    if (!doc.is_object()) throw ParseError("DGP document must be a JSON object");
    if (doc.value("schema", "") != kDgpSchema)
        throw ParseError("expected schema '" + std::string(kDgpSchema) + "', got '" +
                         doc.value("schema", "<missing>") + "'");
    const std::string kind = doc.value("kind", "<missing>");
    try {
        if (kind == "continuous") {
            return Theta::make(
                number_field(doc, "a"), number_field(doc, "b"), number_field(doc, "c"),
                number_field(doc, "pz"), number_field(doc, "M"),
                atoms_from_json(doc.value("f11", json()), "f11"),
                atoms_from_json(doc.value("f10", json()), "f10"),
                atoms_from_json(doc.value("f01", json()), "f01"),
                atoms_from_json(doc.value("f00", json()), "f00"),
                atoms_from_json(doc.value("g11", json()), "g11"),
                atoms_from_json(doc.value("g10", json()), "g10"),
                atoms_from_json(doc.value("g01", json()), "g01"),
                atoms_from_json(doc.value("g00", json()), "g00"));
        }
        if (kind == "binary") {
            return BinaryTheta::make(
                number_field(doc, "a"), number_field(doc, "b"), number_field(doc, "c"),
                number_field(doc, "pz"), number_field(doc, "r11"),
                number_field(doc, "r10"), number_field(doc, "r01"),
                number_field(doc, "r00"), number_field(doc, "t11"),
                number_field(doc, "t10"), number_field(doc, "t01"),
                number_field(doc, "t00"));
        }
    } catch (const InvalidTheta& e) {
        throw ParseError(std::string("invalid DGP: ") + e.what());
    }
    throw ParseError("unknown DGP kind '" + kind + "' (expected continuous or binary)");
}

Dgp load_dgp(std::istream& in, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(origin + ": " + e.what());
    }
    try {
        return dgp_from_json(doc);
    } catch (const ParseError& e) {
        throw ParseError(origin + ": " + e.what());
    }
}

Dgp load_dgp_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return load_dgp(in, path);
}

void save_dgp_file(const std::string& path, const Dgp& dgp) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write '" + path + "'");
    out << canonical_dump(dgp_to_json(dgp));
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    for (char ch : line) {
        if (ch == ',') {
            cells.push_back(cell);
            cell.clear();
        } else if (ch != '\r') {
            cell += ch;
        }
    }
    cells.push_back(cell);
    return cells;
}

std::string trim(const std::string& s) {
    std::size_t lo = s.find_first_not_of(" \t\r\n");
    if (lo == std::string::npos) return "";
    std::size_t hi = s.find_last_not_of(" \t\r\n");
    return s.substr(lo, hi - lo + 1);
}

bool parse_double(const std::string& cell, double& out) {
    const std::string t = trim(cell);
    if (t.empty()) return false;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last && std::isfinite(out);
}

}  // namespace

SampleData read_csv(std::istream& in, const CsvOptions& options) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty input: no header row");
    const std::vector<std::string> header = split_csv_line(line);
    auto find_col = [&](const std::string& name) -> std::size_t {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (trim(header[i]) == name) return i;
        }
        throw ParseError("column '" + name + "' not found in header");
    };
    const std::size_t yi = find_col(options.y_col);
    const std::size_t di = find_col(options.d_col);
    const std::size_t zi = find_col(options.z_col);

    SampleData data;
    std::vector<std::size_t> bad_lines;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const std::vector<std::string> cells = split_csv_line(line);
        const std::size_t needed = std::max({yi, di, zi}) + 1;
        double y;
        double d;
        double z;
        if (cells.size() < needed || !parse_double(cells[yi], y) ||
            !parse_double(cells[di], d) || !parse_double(cells[zi], z)) {
            bad_lines.push_back(line_no);
            continue;
        }
        if (d != 0.0 && d != 1.0)
            throw NotBinary("column '" + options.d_col + "' has non-binary value '" +
                            trim(cells[di]) + "' on line " + std::to_string(line_no));
        if (z != 0.0 && z != 1.0)
            throw NotBinary("column '" + options.z_col + "' has non-binary value '" +
                            trim(cells[zi]) + "' on line " + std::to_string(line_no));
        data.rows.push_back({y, static_cast<std::uint8_t>(d != 0.0),
                             static_cast<std::uint8_t>(z != 0.0)});
    }
    if (!bad_lines.empty()) {
        std::ostringstream msg;
        msg << bad_lines.size() << " row(s) with missing or non-numeric cells on line(s)";
        const std::size_t shown = std::min<std::size_t>(bad_lines.size(), 20);
        for (std::size_t i = 0; i < shown; ++i) msg << ' ' << bad_lines[i];
        if (shown < bad_lines.size()) msg << " ...";
        throw ParseError(msg.str(), bad_lines);
    }
    if (data.empty()) throw ParseError("no data rows");
    return data;
}

SampleData read_csv_file(const std::string& path, const CsvOptions& options) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return read_csv(in, options);
}

void write_csv(std::ostream& out, const SampleData& data, const CsvOptions& options) {
    out << options.y_col << ',' << options.d_col << ',' << options.z_col << '\n';
    char buf[64];
    for (const SampleRow& row : data.rows) {
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, row.y);
        out.write(buf, ptr - buf);
        out << ',' << int(row.d) << ',' << int(row.z) << '\n';
    }
}

namespace {

json optional_to_json(const std::optional<double>& value) {
    if (value) return *value;
    return nullptr;
}

}  // namespace

json estimates_to_json(const Estimates& est) {
    json doc;
    doc["n"] = est.n;
    doc["pz_hat"] = est.pz_hat;
    doc["k1_hat"] = est.k1_hat;
    doc["k2_hat"] = est.k2_hat;
    doc["itt_hat"] = est.itt_hat;
    doc["beta_hat"] = optional_to_json(est.beta_hat);
    doc["gamma_hat"] = optional_to_json(est.gamma_hat);
    doc["lower_bound_hat"] = optional_to_json(est.lower_bound_hat);
    doc["cell_prob_hat"] = optional_to_json(est.cell_prob_hat);
    doc["y_binary"] = est.y_binary;
    return doc;
}

json bootstrap_to_json(const BootstrapCI& ci, Statistic stat) {
    json doc;
    doc["statistic"] = std::string(statistic_name(stat));
    doc["point"] = ci.point;
    doc["lo"] = ci.lo;
    doc["hi"] = ci.hi;
    doc["level"] = ci.level;
    doc["replications"] = ci.replications;
    doc["seed"] = ci.seed;
    return doc;
}

json boundary_report_to_json(const BoundaryReport& report) {
    json doc;
    doc["regime"] = regime_name(report.regime);
    doc["boundary"] = report.boundary;
    doc["compared"] = report.compared;
    doc["verdict"] = verdict_name(report.verdict);
    doc["margin"] = report.margin;
    doc["sufficient_only"] = report.sufficient_only;
    doc["relabeled"] = report.relabeled;
    doc["inputs_consistent"] = report.inputs_consistent;
    return doc;
}

json membership_to_json(const MembershipFlags& flags) {
    json doc;
    doc["shares_valid"] = flags.shares_valid;
    doc["k1_match"] = flags.k1_match;
    doc["k2_match"] = flags.k2_match;
    doc["support_bound"] = flags.support_bound;
    doc["beta_match"] = flags.beta_match;
    doc["mu1_magnitude"] = flags.mu1_magnitude;
    doc["sign_agreement"] = flags.sign_agreement;
    doc["c_within_eta"] = flags.c_within_eta;
    doc["all"] = flags.all();
    return doc;
}

json forge_result_to_json(const ForgeResult& result) {
    json doc;
    doc["twin"] = theta_to_json(result.twin);
    doc["beta_base"] = result.beta_base;
    doc["b1"] = result.b1;
    doc["b2"] = result.b2;
    doc["delta"] = result.delta;
    doc["c_tilde"] = result.c_tilde;
    doc["mu1_twin"] = result.mu1_twin;
    doc["mu2_twin"] = result.mu2_twin;
    doc["mu2_twin_alt_g00"] = result.mu2_twin_alt_g00;
    doc["equivalence_distance"] = result.equivalence_distance;
    doc["membership"] = membership_to_json(result.membership);
    return doc;
}

json binary_forge_result_to_json(const BinaryForgeResult& result) {
    json doc;
    doc["twin"] = binary_theta_to_json(result.twin);
    doc["beta_base"] = result.beta_base;
    doc["c_tilde"] = result.c_tilde;
    doc["eta"] = result.eta;
    doc["mu1_twin"] = result.mu1_twin;
    doc["mu2_twin"] = result.mu2_twin;
    doc["equivalence_distance"] = result.equivalence_distance;
    json membership;
    membership["shares_valid"] = result.membership.shares_valid;
    membership["k1_match"] = result.membership.k1_match;
    membership["k2_match"] = result.membership.k2_match;
    membership["means_valid"] = result.membership.means_valid;
    membership["cell_floors"] = result.membership.cell_floors;
    membership["c_within_eta"] = result.membership.c_within_eta;
    membership["all"] = result.membership.all();
    doc["membership"] = membership;
    return doc;
}

json twin_experiment_to_json(const TwinExperimentReport& report) {
    static const char* kCategoryNames[7] = {"{-1}",      "{0}",    "{-1,0}", "{+1}",
                                            "{-1,+1}",   "{0,+1}", "{-1,0,+1}"};
    auto tally_to_json = [](const DgpTally& tally) {
        json doc;
        json categories;
        for (std::size_t k = 0; k < 7; ++k) {
            if (tally.category_counts[k] > 0)
                categories[kCategoryNames[k]] = tally.category_counts[k];
        }
        doc["categories"] = categories;
        doc["replications"] = tally.replications;
        doc["covered"] = tally.covered;
        doc["coverage"] = tally.coverage();
        doc["neg_in"] = tally.neg_in;
        doc["pos_in"] = tally.pos_in;
        doc["both_in"] = tally.both_in;
        doc["ledger_ok"] = tally.ledger_ok();
        return doc;
    };
    json doc;
    doc["n"] = report.config.n;
    doc["replications"] = report.config.replications;
    doc["seed"] = report.config.seed;
    doc["alpha"] = report.config.alpha;
    doc["procedure"] = report.config.procedure;
    doc["equivalence_distance"] = report.equivalence_distance;
    doc["mu1_base"] = report.mu1_base;
    doc["mu1_twin"] = report.mu1_twin;
    doc["base"] = tally_to_json(report.base);
    doc["twin"] = tally_to_json(report.twin);
    doc["chi_square"] = report.chi_square;
    doc["chi_square_df"] = report.chi_square_df;
    doc["reject_1pct"] = report.reject_1pct;
    doc["ledger_ok"] = report.ledger_ok;
    return doc;
}

json consistency_to_json(const ConsistencyReport& report) {
    json doc;
    doc["true_k1"] = report.true_k1;
    doc["true_k2"] = report.true_k2;
    doc["true_beta"] = std::isnan(report.true_beta) ? json(nullptr) : json(report.true_beta);
    doc["true_gamma"] =
        std::isnan(report.true_gamma) ? json(nullptr) : json(report.true_gamma);
    json rows = json::array();
    for (const ConsistencyRow& row : report.rows) {
        json r;
        r["n"] = row.n;
        r["mae_k1"] = row.mae_k1;
        r["mae_k2"] = row.mae_k2;
        r["mae_beta"] = std::isnan(row.mae_beta) ? json(nullptr) : json(row.mae_beta);
        r["mae_gamma"] = std::isnan(row.mae_gamma) ? json(nullptr) : json(row.mae_gamma);
        r["weak_iv"] = row.weak_iv;
        r["replications"] = row.replications;
        rows.push_back(r);
    }
    doc["rows"] = rows;
    doc["monotone_decay"] = report.monotone_decay;
    return doc;
}

}  // namespace late
