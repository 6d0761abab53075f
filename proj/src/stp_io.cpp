#include "steiner/stp_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace steiner {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

[[noreturn]] void fail(int line_no, const std::string& what) {
    throw std::runtime_error("stp parse error, line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

Instance parse_stp(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;

    bool saw_magic = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (lower(tok) != "33d32945") fail(line_no, "missing STP header magic");
        saw_magic = true;
        break;
    }
    if (!saw_magic) throw std::runtime_error("stp parse error: empty input");

    int n = -1, m = -1, t = -1;
    std::vector<Edge> edges;
    std::vector<int> terminals;
    std::string name;
    bool saw_graph = false, saw_terminals = false;

    enum class Sect { none, graph, terms, comment, skip };
    Sect sect = Sect::none;

    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok[0] == '#') continue;
        std::string key = lower(tok);

        if (sect == Sect::none) {
            if (key == "eof") break;
            if (key != "section") fail(line_no, "expected SECTION or EOF, got '" + tok + "'");
            std::string which;
            ls >> which;
            which = lower(which);
            if (which == "graph") { sect = Sect::graph; saw_graph = true; }
            else if (which == "terminals") { sect = Sect::terms; saw_terminals = true; }
            else if (which == "comment") sect = Sect::comment;
            else sect = Sect::skip;
            continue;
        }
        if (key == "end") { sect = Sect::none; continue; }

        if (sect == Sect::comment) {
            if (key == "name") {
                std::string rest;
                std::getline(ls, rest);
                auto a = rest.find('"');
                auto b = rest.rfind('"');
                if (a != std::string::npos && b > a) name = rest.substr(a + 1, b - a - 1);
            }
            continue;
        }
        if (sect == Sect::skip) continue;

        if (sect == Sect::graph) {
            if (key == "nodes") {
                if (!(ls >> n) || n <= 0) fail(line_no, "bad node count");
            } else if (key == "edges") {
                if (!(ls >> m) || m < 0) fail(line_no, "bad edge count");
            } else if (key == "arcs" || key == "a") {
                fail(line_no, "directed arcs are not supported");
            } else if (key == "e") {
                int u, v;
                double w;
                if (!(ls >> u >> v >> w)) fail(line_no, "malformed edge line");
                if (n < 0) fail(line_no, "edge before node count");
                if (u < 1 || u > n || v < 1 || v > n) fail(line_no, "edge node id out of range");
                edges.push_back({u - 1, v - 1, w});
            } else if (key == "obstacles") {
                // some SteinLib headers carry extras; ignore
            } else {
                fail(line_no, "unknown graph line '" + tok + "'");
            }
            continue;
        }
        if (sect == Sect::terms) {
            if (key == "terminals") {
                if (!(ls >> t) || t <= 0) fail(line_no, "bad terminal count");
            } else if (key == "t") {
                int v;
                if (!(ls >> v)) fail(line_no, "malformed terminal line");
                if (n < 0 || v < 1 || v > n) fail(line_no, "terminal id out of range");
                terminals.push_back(v - 1);
            } else if (key == "root" || key == "rootp") {
                // rooted variants: accepted, root ignored
            } else {
                fail(line_no, "unknown terminal line '" + tok + "'");
            }
            continue;
        }
    }

    if (!saw_graph) throw std::runtime_error("stp parse error: no Graph section");
    if (!saw_terminals) throw std::runtime_error("stp parse error: no Terminals section");
    if (m >= 0 && static_cast<int>(edges.size()) != m)
        throw std::runtime_error("stp parse error: edge count mismatch");
    if (t >= 0 && static_cast<int>(terminals.size()) != t)
        throw std::runtime_error("stp parse error: terminal count mismatch");
    if (terminals.empty()) throw std::runtime_error("stp parse error: no terminals");
    return Instance(n, std::move(edges), std::move(terminals), name);
}

Instance parse_stp_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    Instance inst = parse_stp(buf.str());
    if (inst.name().empty()) {
        Instance named(inst.num_nodes(), inst.edges(), inst.terminals(),
                       std::filesystem::path(path).stem().string());
        return named;
    }
    return inst;
}

std::string write_stp(const Instance& inst) {
    std::ostringstream out;
    out << "33D32945 STP File, STP Format Version 1.0\n";
    if (!inst.name().empty())
        out << "SECTION Comment\nName \"" << inst.name() << "\"\nEND\n";
    out << "SECTION Graph\n";
    out << "Nodes " << inst.num_nodes() << "\n";
    out << "Edges " << inst.edges().size() << "\n";
    for (const auto& e : inst.edges()) {
        out << "E " << e.u + 1 << " " << e.v + 1 << " ";
        double w = e.cost;
        if (w == std::floor(w) && std::abs(w) < 1e15)
            out << static_cast<long long>(w);
        else
            out << w;
        out << "\n";
    }
    out << "END\nSECTION Terminals\n";
    out << "Terminals " << inst.num_terminals() << "\n";
    for (int t : inst.terminals()) out << "T " << t + 1 << "\n";
    out << "END\nEOF\n";
    return out.str();
}

double gap_permil(double cost, double best) {
    if (!(best > 0)) throw std::invalid_argument("gap_permil: bound must be positive");
    return (cost / best - 1.0) * 1000.0;
}

std::string coverage_group(int num_terminals, int num_nodes) {
    // X/10 = ceil(10 |R| / |V|)
    long long x = 10 * ((10LL * num_terminals + num_nodes - 1) / num_nodes);
    if (x < 10) x = 10;
    return "Coverage " + std::to_string(x);
}

std::string coverage_group(const Instance& inst) {
    return coverage_group(inst.num_terminals(), inst.num_nodes());
}

BoundsTable parse_bounds(const std::string& text) {
    BoundsTable table;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string name;
        if (!(ls >> name) || name[0] == '#') continue;
        double value;
        if (!(ls >> value) || !(value > 0))
            throw std::runtime_error("bounds parse error, line " + std::to_string(line_no));
        table[name] = value;
    }
    return table;
}

BoundsTable parse_bounds_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_bounds(buf.str());
}

std::string run_record_csv_header() {
    return "instance,algo,flags,k,cost,gap_permil,time_s,status";
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') { cur += '"'; ++i; }
            else if (c == '"') quoted = false;
            else cur += c;
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

}  // namespace

std::string to_csv_row(const RunRecord& rec) {
    std::ostringstream out;
    out << csv_escape(rec.instance) << ',' << csv_escape(rec.algo) << ','
        << csv_escape(rec.flags) << ',' << rec.k << ',';
    if (!std::isnan(rec.cost)) {
        out.precision(17);
        out << rec.cost;
    }
    out << ',';
    if (!std::isnan(rec.gap_permil)) {
        out.precision(10);
        out << rec.gap_permil;
    }
    out << ',';
    out.precision(6);
    out << std::fixed << rec.time_s << ',' << rec.status;
    return out.str();
}

std::vector<RunRecord> parse_run_records_csv(const std::string& text) {
    std::vector<RunRecord> records;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line == run_record_csv_header()) continue;
        }
        auto f = csv_split(line);
        if (f.size() != 8) throw std::runtime_error("run record csv: bad field count");
        RunRecord rec;
        rec.instance = f[0];
        rec.algo = f[1];
        rec.flags = f[2];
        rec.k = std::stoi(f[3]);
        if (!f[4].empty()) rec.cost = std::stod(f[4]);
        if (!f[5].empty()) rec.gap_permil = std::stod(f[5]);
        rec.time_s = std::stod(f[6]);
        rec.status = f[7];
        if ((rec.status == "success") == std::isnan(rec.cost))
            throw std::runtime_error("run record csv: cost present iff success");
        records.push_back(std::move(rec));
    }
    return records;
}

}  // namespace steiner
