// gridcodes: minimum identifying / locating-dominating / locating-total-
// dominating / (total-)dominating codes in circular, finite and infinite
// grid strips of fixed height, by min-plus transfer-matrix powering with
// pseudo-period detection.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "gridcodes/solver.hpp"

using nlohmann::ordered_json;
using namespace gridcodes;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitCap = 3;
constexpr int kExitUsage = 64;

struct CommonArgs {
    std::string code = "id";
    std::string grid = "square";
    int height = 1;
    bool json = false;
};

CodeKind parse_code(const std::string& s) {
    if (s == "d") return CodeKind::D;
    if (s == "td") return CodeKind::TD;
    if (s == "ld") return CodeKind::LD;
    if (s == "ltd") return CodeKind::LTD;
    if (s == "id") return CodeKind::ID;
    throw std::invalid_argument("unknown code kind: " + s);
}

GridKind parse_grid(const std::string& s) {
    if (s == "square") return GridKind::Square;
    if (s == "triangular") return GridKind::Triangular;
    if (s == "king") return GridKind::King;
    if (s == "toroidal") return GridKind::ToroidalSquare;
    throw std::invalid_argument("unknown grid: " + s);
}

int usage_error(const std::string& message) {
    std::cerr << "usage error: " << message << "\n";
    return kExitUsage;
}

ordered_json stability_json(const StripFamily& fam) {
    ordered_json j;
    switch (fam.stability.outcome) {
        case StabilityOutcome::Stable: {
            const StabilityCert& cert = fam.cert();
            j["outcome"] = "stable";
            j["c"] = cert.c;
            j["p"] = cert.p;
            j["u"] = cert.u;
            j["lambda"] = cert.lambda.str();
            j["reverified"] = cert.reverified;
            if (fam.minimal_pc) {
                j["minimal_p"] = fam.minimal_pc->first;
                j["minimal_c"] = fam.minimal_pc->second;
            }
            break;
        }
        case StabilityOutcome::NoCircuit:
            j["outcome"] = "no-circuit";
            break;
        case StabilityOutcome::NotFoundWithinCap:
            j["outcome"] = "not-found-within-cap";
            j["cap"] = fam.stability.cap;
            break;
    }
    return j;
}

ordered_json graph_json(const StripFamily& fam) {
    return ordered_json{{"raw_vertices", fam.raw_vertices},
                        {"trimmed_vertices", fam.trimmed_vertices}};
}

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    long ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

struct SizeRange {
    int lo = 0;
    int hi = 0;
    bool is_range = false;
};

SizeRange parse_size(const std::string& s) {
    static const std::regex form(R"(^(\d+)(\.\.(\d+))?$)");
    std::smatch m;
    if (!std::regex_match(s, m, form))
        throw std::invalid_argument("--size expects N or LO..HI, got " + s);
    SizeRange r;
    r.lo = std::stoi(m[1]);
    if (m[3].matched) {
        r.hi = std::stoi(m[3]);
        r.is_range = true;
        if (r.hi < r.lo) throw std::invalid_argument("--size range is empty: " + s);
    } else {
        r.hi = r.lo;
    }
    return r;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"minimum domination-like codes in grid strips of fixed height"};
    app.require_subcommand(1);

    RunConfig cfg;
    cfg.threads = static_cast<int>(std::thread::hardware_concurrency());
    if (cfg.threads < 1) cfg.threads = 1;
    if (const char* env = std::getenv("GRIDCODES_STORE_DIR")) cfg.store_dir = env;

    std::string store_dir_flag;
    app.add_option("--threads", cfg.threads, "worker threads for matrix products");
    app.add_option("--power-cap", cfg.power_cap, "maximum matrix exponent searched");
    app.add_option("--store-dir", store_dir_flag,
                   "power store directory (default: $GRIDCODES_STORE_DIR or a temp dir)");
    app.add_option("--memory-cap-bytes", cfg.memory_cap_bytes, "matrix memory cap");
    app.add_option("--oracle-cap", cfg.oracle_cap_vertices, "brute-force vertex cap");

    CommonArgs common;
    std::string size_str;
    bool circular_flag = false, finite_flag = false;
    bool csv_flag = false;
    int max_height = 3;
    std::string table_codes = "id,ld,ltd";
    std::string graph_form = "circular";

    auto add_common = [&](CLI::App* sub, bool with_size) {
        sub->add_option("--code", common.code, "code kind")
            ->required()
            ->check(CLI::IsMember({"d", "td", "ld", "ltd", "id"}));
        sub->add_option("--grid", common.grid, "grid topology")
            ->required()
            ->check(CLI::IsMember({"square", "triangular", "king", "toroidal"}));
        sub->add_option("--height", common.height, "strip height")->required();
        sub->add_flag("--json", common.json, "machine-readable output");
        if (with_size) {
            sub->add_option("--size", size_str, "strip size N or sweep range LO..HI")->required();
            sub->add_flag("--circular", circular_flag, "circular strip (default)");
            sub->add_flag("--finite", finite_flag, "non-circular strip");
        }
    };

    CLI::App* solve = app.add_subcommand("solve", "minimum code cardinality of one strip");
    add_common(solve, true);
    CLI::App* density = app.add_subcommand("density", "minimum density of the infinite strip");
    add_common(density, false);
    CLI::App* pattern = app.add_subcommand("pattern", "an optimal periodic pattern");
    add_common(pattern, false);
    CLI::App* stability = app.add_subcommand("stability", "pseudo-period certificate");
    add_common(stability, false);
    CLI::App* graph = app.add_subcommand("graph", "export the transfer graph as text");
    add_common(graph, false);
    graph->add_option("--form", graph_form, "raw | circular | paths")
        ->check(CLI::IsMember({"raw", "circular", "paths"}));

    CLI::App* table = app.add_subcommand("table", "density table for all grids and codes");
    table->add_option("--max-height", max_height, "largest height (default 3)");
    table->add_option("--codes", table_codes, "comma-separated code kinds");
    table->add_flag("--csv", csv_flag, "CSV output");
    table->add_flag("--json", common.json, "machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (!store_dir_flag.empty()) cfg.store_dir = store_dir_flag;

    try {
        Timer timer;

        if (table->parsed()) {
            std::vector<CodeKind> kinds;
            std::stringstream ss(table_codes);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                if (!tok.empty()) kinds.push_back(parse_code(tok));
            }
            if (kinds.empty() || max_height < 1)
                return usage_error("table needs at least one code kind and --max-height >= 1");

            const GridKind grids[] = {GridKind::Square, GridKind::King,
                                      GridKind::ToroidalSquare, GridKind::Triangular};
            // King and triangular strips of height 1 coincide with the square
            // strip; toroidal strips need height >= 3.
            auto applicable = [](GridKind g, int h) {
                if (g == GridKind::Square) return true;
                if (g == GridKind::ToroidalSquare) return h >= 3;
                return h >= 2;
            };

            Solver solver(cfg);
            ordered_json rows = ordered_json::array();
            std::ostringstream csv;
            csv << "height,grid,code,density\n";
            for (int h = 1; h <= max_height; ++h) {
                for (GridKind g : grids) {
                    for (CodeKind k : kinds) {
                        std::string cell = "X";
                        if (applicable(g, h)) {
                            const auto d = solver.min_density_infinite(k, g, h);
                            cell = d ? d->str() : "infeasible";
                        }
                        csv << h << ',' << to_string(g) << ',' << to_string(k) << ',' << cell
                            << '\n';
                        rows.push_back({{"height", h},
                                        {"grid", to_string(g)},
                                        {"code", to_string(k)},
                                        {"density", cell}});
                    }
                }
            }
            if (common.json) {
                ordered_json out;
                out["query"] = {{"command", "table"}, {"max_height", max_height}};
                out["rows"] = rows;
                out["timings"] = {{"total_ms", timer.ms()}};
                std::cout << out.dump(2) << '\n';
            } else if (csv_flag) {
                std::cout << csv.str();
            } else {
                std::cout << "h";
                for (GridKind g : grids)
                    for (CodeKind k : kinds)
                        std::cout << '\t' << to_string(g) << ':' << to_string(k);
                std::cout << '\n';
                std::size_t i = 0;
                for (int h = 1; h <= max_height; ++h) {
                    std::cout << h;
                    for (GridKind g : grids) {
                        (void)g;
                        for (CodeKind k : kinds) {
                            (void)k;
                            std::string cell = rows[i++]["density"];
                            if (cell == "infeasible") cell = "∅";
                            std::cout << '\t' << cell;
                        }
                    }
                    std::cout << '\n';
                }
            }
            return kExitOk;
        }

        const CodeKind kind = parse_code(common.code);
        const GridKind gridk = parse_grid(common.grid);
        if (gridk == GridKind::ToroidalSquare && common.height < 3)
            return usage_error("toroidal strips need --height >= 3");
        if (common.height < 1) return usage_error("--height must be positive");

        Solver solver(cfg);

        if (solve->parsed()) {
            if (circular_flag && finite_flag)
                return usage_error("--circular and --finite are mutually exclusive");
            const bool circular = !finite_flag;  // circular is the default
            const SizeRange range = parse_size(size_str);
            if (circular && range.lo < 3) return usage_error("circular strips need --size >= 3");
            if (!circular && range.lo < 1) return usage_error("--size must be positive");

            ordered_json results = ordered_json::array();
            bool any_infeasible = false;
            std::ostringstream human;
            human << "n\tminimum\n";
            for (int n = range.lo; n <= range.hi; ++n) {
                const Answer a = circular ? solver.min_circular(kind, gridk, common.height, n)
                                          : solver.min_finite(kind, gridk, common.height, n);
                if (a.feasible) {
                    results.push_back({{"size", n}, {"status", "ok"}, {"value", a.value}});
                    human << n << '\t' << a.value << '\n';
                } else {
                    any_infeasible = true;
                    results.push_back({{"size", n}, {"status", "infeasible"}});
                    human << n << "\tinfeasible\n";
                }
            }

            const StripFamily* fam = nullptr;
            if (range.hi >= (circular ? 5 : 4))
                fam = &solver.family(kind, gridk, common.height, circular);

            if (common.json) {
                ordered_json out;
                out["query"] = {
                    {"command", "solve"},
                    {"code", common.code},
                    {"grid", common.grid},
                    {"height", common.height},
                    {"size", range.is_range ? ordered_json(size_str) : ordered_json(range.lo)},
                    {"circular", circular}};
                if (range.is_range) {
                    out["results"] = results;
                } else {
                    out["answer"] = results[0];
                    out["answer"].erase("size");
                }
                out["stability"] = fam ? stability_json(*fam) : ordered_json(nullptr);
                out["graph"] = fam ? graph_json(*fam) : ordered_json(nullptr);
                out["timings"] = {{"total_ms", timer.ms()}};
                std::cout << out.dump(2) << '\n';
            } else {
                std::cout << human.str();
            }
            return (!range.is_range && any_infeasible) ? kExitInfeasible : kExitOk;
        }

        if (density->parsed() || stability->parsed() || pattern->parsed()) {
            const StripFamily& fam = solver.family(kind, gridk, common.height, true);

            if (density->parsed()) {
                const auto d = solver.min_density_infinite(kind, gridk, common.height);
                if (common.json) {
                    ordered_json out;
                    out["query"] = {{"command", "density"},
                                    {"code", common.code},
                                    {"grid", common.grid},
                                    {"height", common.height},
                                    {"size", "infinite"}};
                    out["answer"] = d ? ordered_json{{"status", "ok"}, {"density", d->str()}}
                                      : ordered_json{{"status", "infeasible"}};
                    out["stability"] = stability_json(fam);
                    out["graph"] = graph_json(fam);
                    out["timings"] = {{"total_ms", timer.ms()}};
                    std::cout << out.dump(2) << '\n';
                } else if (d) {
                    std::cout << "density=" << d->str();
                    if (fam.has_cert()) {
                        const auto& c = fam.cert();
                        std::cout << " lambda=" << c.lambda.str() << " c=" << c.c << " p=" << c.p
                                  << " u=" << c.u;
                    }
                    std::cout << '\n';
                } else {
                    std::cout << "infeasible\n";
                }
                return d ? kExitOk : kExitInfeasible;
            }

            if (stability->parsed()) {
                ordered_json st = stability_json(fam);
                st["raw_vertices"] = fam.raw_vertices;
                st["trimmed_vertices"] = fam.trimmed_vertices;
                if (fam.has_cert()) {
                    const auto karp = min_mean_cycle(fam.graph);
                    st["karp_lambda"] = karp ? karp->str() : "infinity";
                    st["karp_matches"] = karp && *karp == fam.cert().lambda;
                }
                if (common.json) {
                    ordered_json out;
                    out["query"] = {{"command", "stability"},
                                    {"code", common.code},
                                    {"grid", common.grid},
                                    {"height", common.height}};
                    out["stability"] = st;
                    out["timings"] = {{"total_ms", timer.ms()}};
                    std::cout << out.dump(2) << '\n';
                } else {
                    for (auto it = st.begin(); it != st.end(); ++it)
                        std::cout << it.key() << '='
                                  << (it->is_string() ? it->get<std::string>() : it->dump())
                                  << '\n';
                }
                return fam.stability.outcome == StabilityOutcome::NotFoundWithinCap ? kExitCap
                                                                                    : kExitOk;
            }

            // pattern
            const auto p = solver.optimal_pattern(kind, gridk, common.height);
            if (!p) {
                if (common.json) {
                    ordered_json out;
                    out["query"] = {{"command", "pattern"},
                                    {"code", common.code},
                                    {"grid", common.grid},
                                    {"height", common.height}};
                    out["answer"] = {{"status", "infeasible"}};
                    out["timings"] = {{"total_ms", timer.ms()}};
                    std::cout << out.dump(2) << '\n';
                } else {
                    std::cout << "infeasible\n";
                }
                return kExitInfeasible;
            }
            if (common.json) {
                std::vector<std::string> lines;
                for (int r = 0; r < p->height; ++r) {
                    std::string row;
                    for (int c = 0; c < p->period; ++c) row += p->at(r, c) ? 'X' : '.';
                    lines.push_back(row);
                }
                ordered_json out;
                out["query"] = {{"command", "pattern"},
                                {"code", common.code},
                                {"grid", common.grid},
                                {"height", common.height}};
                out["answer"] = {{"status", "ok"},
                                 {"period", p->period},
                                 {"density", p->density.str()},
                                 {"rows", lines}};
                out["stability"] = stability_json(fam);
                out["graph"] = graph_json(fam);
                out["timings"] = {{"total_ms", timer.ms()}};
                std::cout << out.dump(2) << '\n';
            } else {
                render_pattern(*p, kind, gridk, std::cout);
            }
            return kExitOk;
        }

        if (graph->parsed()) {
            AuxGraph g = build_aux_graph(kind, gridk, common.height, cfg.memory_cap_bytes);
            if (graph_form == "circular")
                g = trim(g);
            else if (graph_form == "paths")
                g = trim_for_paths(g);
            export_graph(g, std::cout);
            return kExitOk;
        }

        return usage_error("no subcommand given");
    } catch (const StabilityCapError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitCap;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
}
