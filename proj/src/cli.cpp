// SPDX-License-Identifier: Apache-2.0
#include "carbonledger/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "CLI11.hpp"

#include "carbonledger/analysis.hpp"
#include "carbonledger/catalog.hpp"
#include "carbonledger/error.hpp"
#include "carbonledger/fleet.hpp"
#include "carbonledger/json_io.hpp"
#include "carbonledger/placement.hpp"
#include "carbonledger/presets.hpp"
#include "carbonledger/reproduce.hpp"
#include "carbonledger/service.hpp"
#include "csv.hpp"

namespace carbonledger::cli {

namespace {

struct Common {
    std::string catalog_dir;
    std::string format;
    std::string out_file;
};

void add_common(CLI::App* sub, Common& common)
{
    sub->add_option("--catalog", common.catalog_dir, "Catalog directory (default: $CARBONLEDGER_CATALOG or seeded)");
    sub->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"json", "csv", "table"}));
    sub->add_option("--out", common.out_file, "Write the report to FILE instead of stdout");
}

std::optional<std::filesystem::path> catalog_dir(const Common& common)
{
    if (!common.catalog_dir.empty()) {
        return std::filesystem::path(common.catalog_dir);
    }
    if (const char* env = std::getenv("CARBONLEDGER_CATALOG"); env != nullptr && *env != '\0') {
        return std::filesystem::path(env);
    }
    return std::nullopt;
}

CatalogBundle load(const Common& common)
{
    const auto dir = catalog_dir(common);
    return dir ? load_catalog(*dir) : seed_paper_defaults();
}

json read_json_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw NotFoundError("cannot read " + path);
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_json_text(text.str(), path);
}

// --- rendering ----------------------------------------------------------------

using Cells = std::vector<std::pair<std::string, std::string>>;

std::string cell_text(const json& value)
{
    if (value.is_null()) return "";
    if (value.is_string()) return value.get<std::string>();
    return value.dump();
}

void flatten(const json& value, const std::string& prefix, Cells& cells)
{
    if (value.is_object()) {
        for (const auto& [key, child] : value.items()) {
            flatten(child, prefix.empty() ? key : prefix + "." + key, cells);
        }
        return;
    }
    cells.emplace_back(prefix.empty() ? "value" : prefix, cell_text(value));
}

std::vector<std::vector<std::string>> tabulate(const json& doc, const std::string& rows_key)
{
    std::vector<Cells> rows;
    const json* source = &doc;
    if (!rows_key.empty() && doc.is_object() && doc.contains(rows_key) && doc[rows_key].is_array()) {
        source = &doc[rows_key];
    }
    if (source->is_array()) {
        for (const auto& item : *source) {
            Cells cells;
            flatten(item, "", cells);
            rows.push_back(std::move(cells));
        }
    } else {
        Cells cells;
        flatten(*source, "", cells);
        rows.push_back(std::move(cells));
    }

    std::vector<std::string> header;
    for (const auto& row : rows) {
        for (const auto& [key, text] : row) {
            if (std::find(header.begin(), header.end(), key) == header.end()) {
                header.push_back(key);
            }
        }
    }
    std::vector<std::vector<std::string>> grid{header};
    for (const auto& row : rows) {
        std::vector<std::string> line(header.size());
        for (const auto& [key, text] : row) {
            line[static_cast<std::size_t>(std::find(header.begin(), header.end(), key) - header.begin())] = text;
        }
        grid.push_back(std::move(line));
    }
    return grid;
}

std::string render(json doc, const std::string& format, const std::string& rows_key)
{
    round_significant(doc);
    if (format.empty() || format == "json") {
        return doc.dump(2) + "\n";
    }
    const auto grid = tabulate(doc, rows_key);
    std::string text;
    if (format == "csv") {
        for (const auto& line : grid) {
            text += csv::join(line) + "\n";
        }
        return text;
    }
    std::vector<std::size_t> widths(grid.front().size(), 0);
    for (const auto& line : grid) {
        for (std::size_t i = 0; i < line.size(); ++i) {
            widths[i] = std::max(widths[i], line[i].size());
        }
    }
    for (const auto& line : grid) {
        std::string row;
        for (std::size_t i = 0; i < line.size(); ++i) {
            row += line[i];
            if (i + 1 < line.size()) {
                row += std::string(widths[i] - line[i].size() + 2, ' ');
            }
        }
        text += row + "\n";
    }
    return text;
}

void write_output(const std::string& text, const Common& common, std::ostream& out)
{
    if (common.out_file.empty()) {
        out << text;
        return;
    }
    std::ofstream file(common.out_file, std::ios::binary | std::ios::trunc);
    if (!file || !(file << text) || !file.flush()) {
        throw WriteError("cannot write " + common.out_file);
    }
}

void emit(const json& doc, const Common& common, std::ostream& out, const std::string& rows_key = "")
{
    write_output(render(doc, common.format, rows_key), common, out);
}

// --- workload flags -------------------------------------------------------------

struct WorkloadFlags {
    std::string file;
    std::string hardware;
    long long processors = 0;
    double hours = 0.0;
    std::string label = "workload";

    void add(CLI::App* sub)
    {
        sub->add_option("--workload", file, "Workload JSON file");
        sub->add_option("--hardware", hardware, "Hardware id (instead of --workload)");
        sub->add_option("--processors", processors, "Processor count");
        sub->add_option("--hours", hours, "Run duration in hours");
        sub->add_option("--label", label, "Workload label");
    }

    WorkloadSpec build() const
    {
        if (!file.empty()) {
            return parse_workload(read_json_file(file));
        }
        if (hardware.empty()) {
            throw ValidationError("need --workload FILE or --hardware/--processors/--hours");
        }
        WorkloadSpec w{label, processors, hours, hardware};
        validate(w);
        return w;
    }
};

void require(bool condition, const std::string& message)
{
    if (!condition) {
        throw ValidationError(message);
    }
}

std::vector<std::string> split_list(const std::string& text)
{
    std::vector<std::string> items;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        if (!item.empty()) {
            items.push_back(item);
        }
    }
    return items;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Carbon accounting for ML training workloads", "carbonledger"};
    app.require_subcommand(1, 1);
    Common common;
    std::function<void()> action;

    // catalog
    auto* catalog_cmd = app.add_subcommand("catalog", "Validate, seed or show a catalog");
    catalog_cmd->require_subcommand(1, 1);
    auto* cat_validate = catalog_cmd->add_subcommand("validate", "Load and check a catalog directory");
    add_common(cat_validate, common);
    cat_validate->callback([&] {
        action = [&] {
            const auto bundle = load(common);
            bundle.validate();
            emit(json{{"valid", true},
                      {"hardware", bundle.hardware.size()},
                      {"datacenters", bundle.datacenters.size()},
                      {"regions", bundle.regions.size()}},
                 common, out);
        };
    });
    std::string seed_dir;
    auto* cat_seed = catalog_cmd->add_subcommand("seed", "Write the seeded default catalog to DIR");
    cat_seed->add_option("dir", seed_dir, "Target directory")->required();
    add_common(cat_seed, common);
    cat_seed->callback([&] {
        action = [&] {
            const auto& bundle = seed_paper_defaults();
            save_catalog(bundle, seed_dir);
            emit(json{{"written", seed_dir},
                      {"hardware", bundle.hardware.size()},
                      {"datacenters", bundle.datacenters.size()},
                      {"regions", bundle.regions.size()}},
                 common, out);
        };
    });
    std::string show_kind;
    auto* cat_show = catalog_cmd->add_subcommand("show", "Print catalog entries");
    cat_show->add_option("kind", show_kind, "hardware, datacenters or regions")
        ->check(CLI::IsMember({"hardware", "datacenters", "regions"}));
    add_common(cat_show, common);
    cat_show->callback([&] {
        action = [&] {
            const auto bundle = load(common);
            json hardware = json::array(), datacenters = json::array(), regions = json::array();
            for (const auto& [id, v] : bundle.hardware) hardware.push_back(v);
            for (const auto& [id, v] : bundle.datacenters) datacenters.push_back(v);
            for (const auto& [id, v] : bundle.regions) regions.push_back(v);
            if (show_kind.empty()) {
                emit(json{{"hardware", hardware}, {"datacenters", datacenters}, {"regions", regions}}, common, out,
                     "hardware");
            } else {
                emit(show_kind == "hardware" ? hardware : show_kind == "datacenters" ? datacenters : regions, common, out);
            }
        };
    });

    // estimate
    std::string preset;
    std::string scenario_file;
    std::string datacenter_id;
    std::string region_id;
    std::string method = "flat";
    std::optional<int> start_hour;
    WorkloadFlags workload;
    auto* estimate_cmd = app.add_subcommand("estimate", "Energy and emissions for one scenario");
    add_common(estimate_cmd, common);
    estimate_cmd->add_option("--preset", preset)->check(CLI::IsMember(presets::estimate_names()));
    estimate_cmd->add_option("--scenario", scenario_file, "Scenario JSON file");
    workload.add(estimate_cmd);
    estimate_cmd->add_option("--datacenter", datacenter_id);
    estimate_cmd->add_option("--region", region_id, "Region id (default: the datacenter's region)");
    estimate_cmd->add_option("--method", method)->check(CLI::IsMember({"flat", "hourly"}));
    estimate_cmd->add_option("--start-hour", start_hour)->check(CLI::Range(0, 23));
    estimate_cmd->callback([&] {
        action = [&] {
            const auto bundle = load(common);
            Scenario scenario;
            if (!preset.empty()) {
                scenario = presets::estimate(preset);
            } else if (!scenario_file.empty()) {
                scenario = parse_scenario(read_json_file(scenario_file));
            } else {
                require(!datacenter_id.empty(), "estimate needs --preset, --scenario or --datacenter");
                scenario.label = workload.label;
                scenario.workload = workload.build();
                scenario.datacenter_id = datacenter_id;
                scenario.region_id = region_id.empty() ? bundle.datacenter_at(datacenter_id).region_id : region_id;
                scenario.emissions_method = *parse_emissions_method(method);
                scenario.start_hour = start_hour;
            }
            const auto estimate = evaluate_scenario(scenario, bundle);
            emit(json{{"energy", estimate.energy}, {"emissions", estimate.emissions}}, common, out);
        };
    });

    // compare
    std::string baseline_file;
    std::string candidate_file;
    auto* compare_cmd = app.add_subcommand("compare", "Ratios between a baseline and a candidate scenario");
    add_common(compare_cmd, common);
    compare_cmd->add_option("--preset", preset)->check(CLI::IsMember(presets::comparison_names()));
    compare_cmd->add_option("--baseline", baseline_file, "Baseline scenario JSON file");
    compare_cmd->add_option("--candidate", candidate_file, "Candidate scenario JSON file");
    compare_cmd->callback([&] {
        action = [&] {
            const auto bundle = load(common);
            std::pair<Scenario, Scenario> pair;
            if (!preset.empty()) {
                pair = presets::comparison(preset);
            } else {
                require(!baseline_file.empty() && !candidate_file.empty(),
                        "compare needs --preset or --baseline and --candidate");
                pair = {parse_scenario(read_json_file(baseline_file)), parse_scenario(read_json_file(candidate_file))};
            }
            emit(compare(pair.first, pair.second, bundle), common, out);
        };
    });

    // waterfall
    std::string steps_file;
    std::string baseline_label = "baseline";
    auto* waterfall_cmd = app.add_subcommand("waterfall", "Cumulative 4M reduction factors");
    add_common(waterfall_cmd, common);
    waterfall_cmd->add_option("--preset", preset)->check(CLI::IsMember(presets::waterfall_names()));
    waterfall_cmd->add_option("--steps", steps_file, "JSON array of steps, or {baseline_label, steps}");
    waterfall_cmd->add_option("--baseline-label", baseline_label);
    waterfall_cmd->callback([&] {
        action = [&] {
            const auto bundle = load(common);
            json doc;
            if (!preset.empty()) {
                const auto p = presets::waterfall(preset, bundle);
                doc = waterfall(p.baseline_label, p.steps);
                if (p.scenario_pair) {
                    doc["comparison"] = compare(p.scenario_pair->first, p.scenario_pair->second, bundle);
                }
            } else {
                require(!steps_file.empty(), "waterfall needs --preset or --steps");
                const json input = read_json_file(steps_file);
                std::string label = baseline_label;
                if (input.is_object() && input.contains("baseline_label") && input["baseline_label"].is_string()) {
                    label = input["baseline_label"].get<std::string>();
                }
                const json& steps = input.is_object() && input.contains("steps") ? input["steps"] : input;
                doc = waterfall(label, parse_waterfall_steps(steps));
            }
            emit(doc, common, out, "steps");
        };
    });

    // audit
    std::optional<double> published;
    std::optional<double> actual;
    std::vector<std::string> factor_specs;
    auto* audit_cmd = app.add_subcommand("audit", "Explain a published estimate by multiplicative factors");
    add_common(audit_cmd, common);
    audit_cmd->add_option("--preset", preset)->check(CLI::IsMember(presets::audit_names()));
    audit_cmd->add_option("--published", published, "Published tCO2e");
    audit_cmd->add_option("--actual", actual, "Measured tCO2e");
    audit_cmd->add_option("--factor", factor_specs, "NAME=VALUE, repeatable");
    audit_cmd->callback([&] {
        action = [&] {
            presets::AuditInput input;
            if (!preset.empty()) {
                input = presets::audit(preset);
            } else {
                require(published.has_value(), "audit needs --preset or --published");
                input.published_tco2e = *published;
                input.actual_tco2e = actual;
                for (const auto& spec : factor_specs) {
                    const auto eq = spec.rfind('=');
                    require(eq != std::string::npos && eq > 0, "factor must be NAME=VALUE: " + spec);
                    const auto value = csv::to_double(spec.substr(eq + 1));
                    require(value.has_value(), "factor value is not a number: " + spec);
                    input.factors.push_back({spec.substr(0, eq), *value});
                }
            }
            emit(audit(input.published_tco2e, input.factors, input.actual_tco2e), common, out, "factors");
        };
    });

    // breakeven
    std::optional<double> search_cost;
    std::optional<double> saving;
    std::string unit = "MWh";
    std::vector<long long> evaluate_at;
    auto* breakeven_cmd = app.add_subcommand("breakeven", "Trainings needed to amortize a one-off search cost");
    add_common(breakeven_cmd, common);
    breakeven_cmd->add_option("--preset", preset)->check(CLI::IsMember(presets::breakeven_names()));
    breakeven_cmd->add_option("--search-cost", search_cost);
    breakeven_cmd->add_option("--saving", saving, "Saving per training");
    breakeven_cmd->add_option("--unit", unit)->check(CLI::IsMember({"MWh", "tCO2e"}));
    breakeven_cmd->add_option("--at", evaluate_at, "Training counts to evaluate the net saving at")
        ->check(CLI::NonNegativeNumber);
    breakeven_cmd->callback([&] {
        action = [&] {
            BreakevenReport report;
            if (!preset.empty()) {
                const auto input = presets::breakeven(preset);
                report = breakeven(input.search_cost, input.per_training_saving, input.unit);
            } else {
                require(search_cost && saving, "breakeven needs --preset or --search-cost and --saving");
                report = breakeven(*search_cost, *saving, unit);
            }
            const auto counts = evaluate_at.empty() ? std::vector<long long>{1, report.breakeven_count} : evaluate_at;
            emit(breakeven_to_json(report, counts), common, out, "net_at");
        };
    });

    // place
    std::string query_file;
    std::string region_list;
    std::string objective = "min_intensity";
    std::optional<int> earliest;
    std::optional<int> latest;
    auto* place_cmd = app.add_subcommand("place", "Rank regions and start hours for a training run");
    add_common(place_cmd, common);
    place_cmd->add_option("--preset", preset)->check(CLI::IsMember(presets::placement_names()));
    place_cmd->add_option("--query", query_file, "Placement query JSON file");
    workload.add(place_cmd);
    place_cmd->add_option("--regions", region_list, "Comma-separated candidate region ids");
    place_cmd->add_option("--datacenter", datacenter_id, "Datacenter whose PUE applies");
    place_cmd->add_option("--objective", objective)->check(CLI::IsMember({"min_intensity", "max_cfe"}));
    place_cmd->add_option("--earliest", earliest)->check(CLI::Range(0, 23));
    place_cmd->add_option("--latest", latest)->check(CLI::Range(0, 23));
    place_cmd->callback([&] {
        action = [&] {
            const auto bundle = load(common);
            PlacementQuery query;
            if (!preset.empty()) {
                query = presets::placement(preset);
            } else if (!query_file.empty()) {
                query = parse_placement_query(read_json_file(query_file));
            } else {
                require(!region_list.empty() && !datacenter_id.empty(),
                        "place needs --preset, --query or --regions and --datacenter");
                require(earliest.has_value() == latest.has_value(), "--earliest and --latest go together");
                query.workload = workload.build();
                query.candidate_region_ids = split_list(region_list);
                query.datacenter_id = datacenter_id;
                query.objective = *parse_placement_objective(objective);
                if (earliest) {
                    query.window = StartWindow::range(*earliest, *latest);
                }
            }
            emit(rank_regions(query, bundle), common, out, "ranking");
        };
    });

    // fleet
    std::vector<std::string> snapshot_files;
    auto* fleet_cmd = app.add_subcommand("fleet", "ML share of fleet energy");
    add_common(fleet_cmd, common);
    fleet_cmd->add_option("--preset", preset)->check(CLI::IsMember(presets::fleet_names()));
    fleet_cmd->add_option("--snapshot", snapshot_files, "Snapshot JSON file; repeated files are summed");
    fleet_cmd->callback([&] {
        action = [&] {
            FleetSnapshot snapshot;
            if (!preset.empty()) {
                snapshot = presets::fleet(preset);
            } else {
                require(!snapshot_files.empty(), "fleet needs --preset or --snapshot");
                snapshot = parse_fleet_snapshot(read_json_file(snapshot_files.front()));
                for (std::size_t i = 1; i < snapshot_files.size(); ++i) {
                    snapshot += parse_fleet_snapshot(read_json_file(snapshot_files[i]));
                }
            }
            emit(fleet_report(snapshot), common, out);
        };
    });

    // mobile
    presets::MobileInput mobile;
    bool mobile_flags = false;
    auto* mobile_cmd = app.add_subcommand("mobile", "Upper bound on on-device ML energy");
    add_common(mobile_cmd, common);
    mobile_cmd->add_option("--preset", preset)->check(CLI::IsMember(presets::mobile_names()));
    auto* phones_opt = mobile_cmd->add_option("--phones", mobile.phones);
    mobile_cmd->add_option("--phone-twh", mobile.global_phone_twh, "Global phone energy, TWh");
    mobile_cmd->add_option("--ml-share", mobile.ml_share_bound, "Upper bound on the ML share");
    mobile_cmd->add_option("--server-twh", mobile.server_ml_twh, "Server-side ML energy, TWh");
    mobile_cmd->callback([&] {
        mobile_flags = phones_opt->count() > 0;
        action = [&] {
            presets::MobileInput input = mobile;
            if (!preset.empty()) {
                input = presets::mobile(preset);
            } else {
                require(mobile_flags, "mobile needs --preset or --phones/--phone-twh/--ml-share/--server-twh");
            }
            emit(mobile_bound(input.phones, input.global_phone_twh, input.ml_share_bound, input.server_ml_twh), common,
                 out);
        };
    });

    // reproduce
    int reproduce_status = kExitOk;
    auto* reproduce_cmd = app.add_subcommand("reproduce", "Run the headline-number acceptance table");
    add_common(reproduce_cmd, common);
    reproduce_cmd->callback([&] {
        action = [&] {
            const auto results = reproduce::run_all(reproduce::in_process_transport());
            bool all = true;
            for (const auto& r : results) {
                all = all && r.passed;
            }
            if (common.format.empty()) {
                std::ostringstream text;
                reproduce::print(results, text);
                write_output(text.str(), common, out);
            } else {
                json rows = json::array();
                for (const auto& r : results) {
                    rows.push_back({{"id", r.id}, {"title", r.title}, {"passed", r.passed}, {"detail", r.detail}});
                }
                emit(rows, common, out);
            }
            reproduce_status = all ? kExitOk : kExitFailure;
        };
    });

    // serve
    std::string bind = "127.0.0.1:8080";
    auto* serve_cmd = app.add_subcommand("serve", "Run the JSON HTTP API");
    serve_cmd->add_option("--catalog", common.catalog_dir, "Catalog directory (default: $CARBONLEDGER_CATALOG or seeded)");
    serve_cmd->add_option("--bind", bind, "HOST:PORT");
    serve_cmd->callback([&] {
        action = [&] { reproduce_status = service::run(catalog_dir(common), bind); };
    });

    if (argc > 1 && argv[1][0] != '-' && app.get_subcommand_no_throw(argv[1]) == nullptr) {
        err << "error: unknown subcommand '" << argv[1] << "'\n\n" << app.help();
        return kExitUsage;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        if (action) {
            action();
        }
        return reproduce_status;
    } catch (const NotFoundError& e) {
        err << "error: " << e.code() << ": " << e.what() << "\n";
        return kExitFailure;
    } catch (const WriteError& e) {
        err << "error: " << e.code() << ": " << e.what() << "\n";
        return kExitFailure;
    } catch (const Error& e) {
        err << "error: " << e.code() << ": " << e.what() << "\n";
        return kExitUsage;
    } catch (const json::exception& e) {
        err << "error: validation_error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: internal: " << e.what() << "\n";
        return kExitFailure;
    }
}

}  // namespace carbonledger::cli
