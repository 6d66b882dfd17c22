#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "nahmforge/catalog.hpp"

using namespace nahmforge;

namespace {

struct RunConfig {
    std::string command;
    std::optional<Rational> order;
    std::string format = "text";
    unsigned jobs = 1;
    std::string catalog_path;
    std::vector<std::string> ids;
    std::string family;
    std::string status_filter;
    std::string side = "lhs";
    std::string expr_json;
    std::string exponent;
    std::string order_text;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Catalog load_catalog(const RunConfig& cfg) {
    Catalog cat = Catalog::builtin();
    std::string overlay = cfg.catalog_path;
    if (overlay.empty()) {
        if (const char* env = std::getenv("NAHMFORGE_CATALOG")) overlay = env;
    }
    if (!overlay.empty()) cat.add_overlay_json(slurp(overlay));
    return cat;
}

/* a concrete generator instance like "shift-3(2)" has no record of its own;
 * report its label and status through the generator record */
const IdentityRecord* record_for(const Catalog& cat, const std::string& id) {
    if (const IdentityRecord* r = cat.find(id)) return r;
    auto open = id.rfind('(');
    if (open == std::string::npos) return nullptr;
    return cat.find(id.substr(0, open) + "(i)");
}

void print_report(const Catalog& cat, const VerificationReport& rep,
                  const std::string& format) {
    const IdentityRecord* rec = record_for(cat, rep.id);
    Status st = rec ? rec->status : Status::Theorem;
    if (format == "json") {
        nlohmann::ordered_json j;
        j["id"] = rep.id;
        j["paper_label"] = rec ? rec->paper_label : "";
        j["status"] = to_string(st);
        j["order_checked"] = to_string(rep.order_checked);
        j["outcome"] = to_string(rep.outcome);
        if (rep.mismatch) {
            j["mismatch"] = {{"exponent", to_string(rep.mismatch->exponent)},
                             {"lhs", rep.mismatch->lhs.get_str()},
                             {"rhs", rep.mismatch->rhs.get_str()}};
        } else {
            j["mismatch"] = nullptr;
        }
        j["elapsed_s"] = rep.elapsed_s;
        std::cout << j.dump() << "\n";
        return;
    }
    std::cout << rep.id << ": ";
    bool conj = st == Status::Conjecture;
    switch (rep.outcome) {
        case Outcome::Match:
            std::cout << (conj ? "conjecture-verified-to-order " : "match at order ")
                      << to_string(rep.order_checked);
            break;
        case Outcome::Mismatch:
            std::cout << (conj ? "conjecture-falsified-at-order " : "mismatch at order ")
                      << to_string(rep.order_checked) << "  (first difference at q^"
                      << to_string(rep.mismatch->exponent) << ": "
                      << rep.mismatch->lhs.get_str() << " vs "
                      << rep.mismatch->rhs.get_str() << ")";
            break;
        case Outcome::AccuracyInsufficient:
            std::cout << "accuracy-insufficient, reached order "
                      << to_string(rep.order_checked);
            break;
    }
    std::cout << "  [" << rep.elapsed_s << "s]\n";
}

int run_verification(const Catalog& cat, std::vector<std::string> ids,
                     const RunConfig& cfg) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    std::vector<VerificationReport> reps(ids.size());
    std::vector<std::string> errors(ids.size());
    std::atomic<size_t> next{0}, done{0};
    auto worker = [&] {
        for (size_t i; (i = next.fetch_add(1)) < ids.size();) {
            try {
                reps[i] = cat.verify(ids[i], cfg.order);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
            std::cerr << "[" << done.fetch_add(1) + 1 << "/" << ids.size() << "] "
                      << ids[i] << "\n";
        }
    };
    unsigned jobs = std::max(1u, cfg.jobs);
    if (jobs <= 1 || ids.size() <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < std::min<size_t>(jobs, ids.size()); ++t)
            pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (size_t i = 0; i < ids.size(); ++i)
        if (!errors[i].empty()) {
            std::cerr << "error: " << errors[i] << "\n";
            return 2;
        }
    bool failed = false;
    for (const auto& rep : reps) {
        print_report(cat, rep, cfg.format);
        if (rep.outcome != Outcome::Match) failed = true;
    }
    return failed ? 1 : 0;
}

int run_list(const Catalog& cat, const RunConfig& cfg) {
    std::optional<Status> st;
    if (!cfg.status_filter.empty()) st = status_from_string(cfg.status_filter);
    for (const IdentityRecord* r : cat.list(cfg.family, st)) {
        if (cfg.format == "json") {
            nlohmann::ordered_json j;
            j["id"] = r->id;
            j["paper_label"] = r->paper_label;
            j["status"] = to_string(r->status);
            j["default_order"] = to_string(r->default_order);
            j["family"] = r->family;
            j["family_params"] = r->family_params;
            j["metadata_only"] = r->metadata_only;
            j["note"] = r->note;
            std::cout << j.dump() << "\n";
        } else {
            std::cout << r->id << "\t" << to_string(r->status) << "\torder "
                      << to_string(r->default_order) << "\t" << r->family << "\t"
                      << r->paper_label;
            if (r->metadata_only) std::cout << "\t[metadata-only]";
            if (!r->note.empty()) std::cout << "\t" << r->note;
            std::cout << "\n";
        }
    }
    return 0;
}

ExprPtr select_expr(const Catalog& cat, const RunConfig& cfg, Rational* default_order) {
    if (!cfg.expr_json.empty()) {
        if (!cfg.ids.empty())
            throw std::invalid_argument("give either --id or --expr, not both");
        return expr_from_json(cfg.expr_json);
    }
    if (cfg.ids.size() != 1)
        throw std::invalid_argument("need exactly one --id or an --expr document");
    const IdentityRecord* r = record_for(cat, cfg.ids[0]);
    if (!r) throw std::invalid_argument("unknown identity id: " + cfg.ids[0]);
    if (default_order) *default_order = r->default_order;
    if (cfg.side == "lhs") return r->lhs;
    if (cfg.side == "rhs") return r->rhs;
    throw std::invalid_argument("--side must be lhs or rhs");
}

int run_eval(const Catalog& cat, const RunConfig& cfg) {
    Rational ord = 50;
    ExprPtr e = select_expr(cat, cfg, &ord);
    if (cfg.order) ord = *cfg.order;
    QSeries f = eval(e, ord);
    if (cfg.format == "json") {
        nlohmann::ordered_json j;
        j["accuracy"] = to_string(f.accuracy());
        nlohmann::ordered_json terms = nlohmann::ordered_json::array();
        for (const auto& [exp, c] : f.terms())
            terms.push_back({to_string(exp), c.get_str()});
        j["terms"] = std::move(terms);
        std::cout << j.dump() << "\n";
    } else {
        for (const auto& [exp, c] : f.terms())
            std::cout << to_string(exp) << "\t" << c.get_str() << "\n";
    }
    return 0;
}

int run_coeff(const Catalog& cat, const RunConfig& cfg) {
    Rational target = parse_rational(cfg.exponent);
    ExprPtr e = select_expr(cat, cfg, nullptr);
    Rational ord = cfg.order ? *cfg.order : target + 1;
    if (!(ord > target))
        throw std::invalid_argument("--order must exceed the requested exponent");
    QSeries f = eval(e, ord);
    if (!(target < f.accuracy()))
        throw std::invalid_argument("series accuracy does not reach the exponent");
    std::cout << to_string(f.coeff(target)) << "\n";
    return 0;
}

int run(const RunConfig& cfg) {
    Catalog cat = load_catalog(cfg);
    if (cfg.command == "verify") {
        std::vector<std::string> ids = cfg.ids;
        for (const auto& id : ids)
            if (!record_for(cat, id)) throw std::invalid_argument("unknown identity id: " + id);
        return run_verification(cat, std::move(ids), cfg);
    }
    if (cfg.command == "verify-all") {
        std::optional<Status> st;
        if (!cfg.status_filter.empty()) st = status_from_string(cfg.status_filter);
        std::vector<std::string> ids;
        for (const IdentityRecord* r : cat.list(cfg.family, st))
            if (!r->metadata_only) ids.push_back(r->id);
        return run_verification(cat, std::move(ids), cfg);
    }
    if (cfg.command == "list") return run_list(cat, cfg);
    if (cfg.command == "eval") return run_eval(cat, cfg);
    if (cfg.command == "coeff") return run_coeff(cat, cfg);
    throw std::invalid_argument("unknown command");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact q-series engine and identity verifier"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto add_common = [&](CLI::App* sub, bool with_jobs) {
        sub->add_option("--format", cfg.format, "output format: text or json")
            ->check(CLI::IsMember({"text", "json"}));
        sub->add_option("--catalog", cfg.catalog_path,
                        "overlay catalog JSON file (default: $NAHMFORGE_CATALOG)");
        sub->add_option("--order", cfg.order_text,
                        "series order, a positive rational like 120 or 49/2");
        if (with_jobs)
            sub->add_option("--jobs", cfg.jobs, "number of worker threads")
                ->check(CLI::PositiveNumber);
    };

    CLI::App* verify = app.add_subcommand("verify", "verify selected identities");
    verify->add_option("--id", cfg.ids, "identity id (repeatable)")->required();
    add_common(verify, true);

    CLI::App* all = app.add_subcommand("verify-all", "verify every checkable identity");
    all->add_option("--family", cfg.family, "restrict to one family");
    all->add_option("--status", cfg.status_filter,
                    "restrict to theorem / conjecture / known-classical");
    add_common(all, true);

    CLI::App* list = app.add_subcommand("list", "list catalog records");
    list->add_option("--family", cfg.family, "restrict to one family");
    list->add_option("--status", cfg.status_filter,
                     "restrict to theorem / conjecture / known-classical");
    list->add_option("--format", cfg.format, "output format: text or json")
        ->check(CLI::IsMember({"text", "json"}));
    list->add_option("--catalog", cfg.catalog_path, "overlay catalog JSON file");

    CLI::App* ev = app.add_subcommand("eval", "expand a side or expression");
    ev->add_option("--id", cfg.ids, "identity id");
    ev->add_option("--side", cfg.side, "lhs or rhs")
        ->check(CLI::IsMember({"lhs", "rhs"}));
    ev->add_option("--expr", cfg.expr_json, "inline expression JSON");
    add_common(ev, false);

    CLI::App* co = app.add_subcommand("coeff", "print a single coefficient");
    co->add_option("--id", cfg.ids, "identity id");
    co->add_option("--side", cfg.side, "lhs or rhs")
        ->check(CLI::IsMember({"lhs", "rhs"}));
    co->add_option("--expr", cfg.expr_json, "inline expression JSON");
    co->add_option("--exponent", cfg.exponent, "exponent of q, a rational")->required();
    add_common(co, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    cfg.command = app.get_subcommands().front()->get_name();
    try {
        if (!cfg.order_text.empty()) {
            cfg.order = parse_rational(cfg.order_text);
            if (!(*cfg.order > 0))
                throw std::invalid_argument("--order must be positive");
        }
        return run(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
