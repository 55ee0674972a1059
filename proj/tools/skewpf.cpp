// Command-line front end: classification reports, invariant profiles,
// invariant tables, orbit sampling, and witness re-verification for 6x6
// skew matrices of linear forms with identically vanishing Pfaffian.
//
// Exit codes: 0 = verified / success, 2 = unverified or unknown outcome,
// 1 = input or usage error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "skewpf/io.hpp"

namespace {

using namespace skewpf;

constexpr int EXIT_VERIFIED = 0;
constexpr int EXIT_INPUT_ERROR = 1;
constexpr int EXIT_UNKNOWN = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Budget defaults, overridable by environment and by --budget (which caps
// the number of S-pairs the Groebner engine may process).
GroebnerBudget budget_from_env() {
    GroebnerBudget b;
    if (const char* s = std::getenv("SKEWPF_MAX_PAIRS")) b.max_pairs = std::stoull(s);
    if (const char* s = std::getenv("SKEWPF_MAX_BASIS")) b.max_basis = std::stoull(s);
    if (const char* s = std::getenv("SKEWPF_MAX_DEGREE")) b.max_degree = std::stoi(s);
    return b;
}

struct CommonFlags {
    std::uint64_t seed = 1;
    std::uint64_t budget = 0;  // 0 = keep defaults
    unsigned jobs = 1;
    bool human = false;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_jobs = false) {
    cmd->add_option("--seed", f.seed, "seed for all randomized searches");
    cmd->add_option("--budget", f.budget,
                    "Groebner resource limit (maximum S-pairs processed)");
    cmd->add_flag("--human", f.human, "aligned text output instead of JSON");
    if (with_jobs)
        cmd->add_option("--jobs", f.jobs, "worker threads across input files")
            ->check(CLI::PositiveNumber);
}

GroebnerBudget make_budget(const CommonFlags& f) {
    GroebnerBudget b = budget_from_env();
    if (f.budget > 0) b.max_pairs = f.budget;
    return b;
}

SkewLinMatrix load_matrix(const std::string& path) {
    SkewLinMatrix m = SkewLinMatrix::zero(VariableSet::prefixed("x", 1), 2);
    matrix_document_parse_check(read_file(path), &m);
    return m;
}

int cmd_classify(const std::vector<std::string>& inputs, const CommonFlags& flags) {
    GroebnerBudget budget = make_budget(flags);
    struct Slot {
        std::string text;
        bool ok = false;
        bool verified = false;
        std::string error;
    };
    std::vector<Slot> slots(inputs.size());
    std::mutex next_mutex;
    std::size_t next = 0;
    auto worker = [&] {
        for (;;) {
            std::size_t k;
            {
                std::lock_guard<std::mutex> lock(next_mutex);
                if (next >= inputs.size()) return;
                k = next++;
            }
            try {
                auto m = load_matrix(inputs[k]);
                if (auto pf = pfaffian(m); !pf.is_zero())
                    throw ParseError("Pfaffian does not vanish: Pf(M) = " + pf.to_string());
                auto rep = classify_full(m, flags.seed, {}, budget);
                slots[k].ok = true;
                slots[k].verified = rep.verified;
                slots[k].text = flags.human ? human_report(rep) : report_to_json(rep).dump(2);
            } catch (const std::exception& e) {
                slots[k].error = e.what();
            }
        }
    };
    unsigned nthreads = std::min<std::size_t>(flags.jobs, inputs.size());
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    bool any_error = false, all_verified = true;
    for (std::size_t k = 0; k < inputs.size(); ++k) {
        if (!slots[k].ok) {
            std::cerr << inputs[k] << ": " << slots[k].error << "\n";
            any_error = true;
            continue;
        }
        if (inputs.size() > 1) std::cout << "# " << inputs[k] << "\n";
        std::cout << slots[k].text << "\n";
        if (!slots[k].verified) all_verified = false;
    }
    if (any_error) return EXIT_INPUT_ERROR;
    return all_verified ? EXIT_VERIFIED : EXIT_UNKNOWN;
}

int cmd_invariants(const std::string& input, const CommonFlags& flags) {
    auto m = load_matrix(input);
    auto fp = fingerprint(m, make_budget(flags), /*with_z_profile=*/true);
    if (flags.human) {
        std::cout << fp.to_string() << "\n";
    } else {
        std::cout << fingerprint_to_json(fp).dump(2) << "\n";
    }
    return EXIT_VERIFIED;
}

int cmd_tables() {
    std::cout << render_tables();
    return EXIT_VERIFIED;
}

int cmd_sample(const std::string& name, std::size_t varcount, std::uint64_t seed,
               std::size_t count) {
    for (std::size_t k = 0; k < count; ++k) {
        Json meta = {{"source", name}, {"seed", seed + k}};
        SkewLinMatrix m = [&] {
            if (name.rfind("type-", 0) == 0)
                return p4_orbit_sample(label_from_name(name.substr(5)), seed + k);
            return orbit_sample(name, varcount, seed + k);
        }();
        std::cout << matrix_to_json(m, meta).dump() << "\n";
    }
    return EXIT_VERIFIED;
}

int cmd_verify(const std::string& matrix_path, const std::string& report_path) {
    auto m = load_matrix(matrix_path);
    Json rep;
    try {
        rep = Json::parse(read_file(report_path));
    } catch (const Json::parse_error& e) {
        throw ParseError(std::string("report JSON parse error: ") + e.what());
    }
    if (!rep.is_object() || !rep.contains("label") || !rep["label"].is_string())
        throw ParseError("report needs a string \"label\" field");
    std::string label = rep["label"].get<std::string>();
    if (!rep.contains("witness") || rep["witness"].is_null()) {
        std::cout << "no witness present\n";
        return EXIT_UNKNOWN;
    }
    Congruence g = congruence_from_json(rep["witness"]);
    bool ok = verify_format_witness(m, g, pattern(label));
    std::cout << (ok ? "verified" : "NOT verified") << ": label " << label << "\n";
    return ok ? EXIT_VERIFIED : EXIT_UNKNOWN;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact classification of 6x6 skew matrices of linear forms "
                 "with vanishing Pfaffian"};
    app.require_subcommand(1);

    CommonFlags cflags;
    std::vector<std::string> classify_inputs;
    auto* classify =
        app.add_subcommand("classify", "classify matrix documents and emit reports");
    classify->add_option("inputs", classify_inputs, "matrix document files")
        ->required()
        ->check(CLI::ExistingFile);
    add_common(classify, cflags, /*with_jobs=*/true);

    CommonFlags iflags;
    std::string inv_input;
    auto* invariants = app.add_subcommand("invariants", "exact invariant profile of a matrix");
    invariants->add_option("input", inv_input, "matrix document file")
        ->required()
        ->check(CLI::ExistingFile);
    add_common(invariants, iflags);

    auto* tables = app.add_subcommand("tables", "regenerate the invariant tables from scratch");

    std::string sample_name;
    std::size_t sample_vars = 5, sample_count = 1;
    std::uint64_t sample_seed = 1;
    auto* sample = app.add_subcommand("sample", "deterministic orbit samples as documents");
    sample->add_option("pattern", sample_name,
                       "catalog pattern name, or type-a..type-f for normal-form orbits")
        ->required();
    sample->add_option("--seed", sample_seed, "base seed");
    sample->add_option("--count", sample_count, "number of documents")->check(CLI::PositiveNumber);
    sample->add_option("--vars", sample_vars, "number of variables")->check(CLI::PositiveNumber);

    std::string verify_matrix, verify_report;
    auto* verify = app.add_subcommand("verify", "re-check a classification witness from scratch");
    verify->add_option("matrix", verify_matrix, "matrix document file")
        ->required()
        ->check(CLI::ExistingFile);
    verify->add_option("report", verify_report, "classification report JSON")
        ->required()
        ->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
        if (classify->parsed()) return cmd_classify(classify_inputs, cflags);
        if (invariants->parsed()) return cmd_invariants(inv_input, iflags);
        if (tables->parsed()) return cmd_tables();
        if (sample->parsed())
            return cmd_sample(sample_name, sample_vars, sample_seed, sample_count);
        if (verify->parsed()) return cmd_verify(verify_matrix, verify_report);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? EXIT_VERIFIED : EXIT_INPUT_ERROR;
    } catch (const skewpf::ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return EXIT_INPUT_ERROR;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return EXIT_INPUT_ERROR;
    } catch (const skewpf::ResourceError& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return EXIT_UNKNOWN;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_INPUT_ERROR;
    }
    return EXIT_INPUT_ERROR;
}
