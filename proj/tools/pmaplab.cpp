#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include <pmaplab/cutfinder.hpp>
#include <pmaplab/gen.hpp>
#include <pmaplab/io.hpp>
#include <pmaplab/pmap.hpp>
#include <pmaplab/pme.hpp>
#include <pmaplab/reconstructor.hpp>
#include <pmaplab/rod.hpp>

using namespace pmaplab;

namespace {

struct Config {
    std::string kind = "dense";
    std::string field;
    int n = 0, r = 0;
    std::vector<int> split;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string in, out, stats, a, b;
    std::string method = "det";
    int samples = 32;
    bool oracle_only = false, blackbox = false, assume_prop_r = false;
};

json read_json(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw FormatError("cannot open " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_json_text(ss.str());
}

void write_json(const std::string& path, const json& j) {
    std::string text = j.dump(1) + "\n";
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream os(path);
    if (!os) throw FormatError("cannot write " + path);
    os << text;
}

FieldSpec field_of(const json& j) {
    if (!j.contains("field")) throw FormatError("missing field");
    return field_spec_from_json(j.at("field"));
}

FieldSpec parse_field_flag(const std::string& s, int n) {
    if (s.empty()) return FieldSpec::prime(choose_prime(n));
    if (s == "rational") return FieldSpec::rational();
    try {
        return FieldSpec::prime(std::stoull(s));
    } catch (const std::logic_error&) {
        throw FormatError("--field takes 'rational' or a prime modulus");
    }
}

void need_seed(const Config& c) {
    if (!c.seed_given) throw std::invalid_argument("--seed is required for this subcommand");
}

int cmd_gen(const Config& c) {
    need_seed(c);
    if (c.n < 1) throw std::invalid_argument("--n must be positive");
    return with_field(parse_field_flag(c.field, c.n), [&](const auto& f) {
        Rng rng = Rng(c.seed).stream("generation");
        if (c.kind == "dense") {
            write_json(c.out, matrix_to_json(gen_random_dense(f, c.n, rng)));
        } else if (c.kind == "cut") {
            auto sizes = c.split.empty() ? std::vector<int>{c.n / 2} : c.split;
            write_json(c.out, matrix_to_json(gen_planted_cut(f, c.n, sizes, rng)));
        } else if (c.kind == "rod") {
            write_json(c.out, rod_to_json(gen_rod_instance(f, c.n, c.r > 0 ? c.r : c.n, rng)));
        } else {
            throw std::invalid_argument("--kind must be dense, cut or rod");
        }
        return 0;
    });
}

int cmd_solve_pmap(const Config& c) {
    need_seed(c);
    json in = read_json(c.in);
    return with_field(field_of(in), [&](const auto& f) {
        PmapStats st;
        // The solver only ever sees the box.
        auto box = box_from_matrix(matrix_from_json(f, in));
        int n = in.at("n").get<int>();
        auto out = solve_blackbox_pmap(box, n, Rng(c.seed), &st);
        write_json(c.out, matrix_to_json(out));
        if (!c.stats.empty()) {
            json s;
            s["oracle_only"] = c.oracle_only;
            s["retries"] = st.retries;
            s["box_queries"] = st.box_queries;
            s["minor_queries"] = st.minor_queries;
            s["combines"] = st.combines;
            s["no_cut_calls"] = st.no_cut_calls;
            s["blocks"] = st.blocks;
            s["failures"] = st.failures;
            s["seconds"] = {{"blocks", st.t_blocks}, {"reconstruct", st.t_reconstruct}, {"verify", st.t_verify}};
            write_json(c.stats, s);
        }
        return 0;
    });
}

int cmd_learn_rod(const Config& c) {
    need_seed(c);
    json in = read_json(c.in);
    return with_field(field_of(in), [&](const auto& f) {
        auto inst = rod_from_json(f, in);
        auto learned = learn_rod(rod_box(inst), inst.n, Rng(c.seed));
        write_json(c.out, rod_to_json(learned));
        return 0;
    });
}

int cmd_test_pme(const Config& c) {
    json ja = read_json(c.a), jb = read_json(c.b);
    FieldSpec fa = field_of(ja), fb = field_of(jb);
    if (fa.kind != fb.kind || fa.modulus != fb.modulus) throw FormatError("matrices are over different fields");
    return with_field(fa, [&](const auto& f) {
        auto a = matrix_from_json(f, ja), b = matrix_from_json(f, jb);
        PmeVerdict v;
        if (c.method == "det") {
            v = test_pme(a, b);
        } else if (c.method == "brute") {
            v = pme_bruteforce(a, b);
        } else if (c.method == "rand") {
            need_seed(c);
            Rng rng = Rng(c.seed).stream("samples");
            v = pme_randomized(a, b, rng, c.samples);
        } else {
            throw std::invalid_argument("--method must be det, brute or rand");
        }
        std::cout << verdict_to_json(v).dump() << "\n";
        return v.equal ? 0 : 1;
    });
}

int cmd_find_cut(const Config& c) {
    json in = read_json(c.in);
    return with_field(field_of(in), [&](const auto& f) {
        auto a = matrix_from_json(f, in);
        std::optional<IndexSet> X;
        if (c.blackbox) {
            if (a.n() >= 4) {
                auto fam = submatrix_family(pm_from_box(box_from_matrix(a)), a.labels());
                if (auto ps = find_plausible_set(fam)) X = ps->S;
            }
        } else {
            X = find_cut_explicit(a);
        }
        if (!X) {
            std::cout << "NO\n";
        } else {
            for (std::size_t i = 0; i < X->size(); ++i) std::cout << (i ? " " : "") << (*X)[i];
            std::cout << "\n";
        }
        return 0;
    });
}

int cmd_reconstruct(const Config& c) {
    json in = read_json(c.in);
    return with_field(field_of(in), [&](const auto& f) {
        auto a = matrix_from_json(f, in);
        if (!c.assume_prop_r && !verify_property_R(a))
            throw std::invalid_argument("input lacks property R (pass --assume-prop-r to skip the check)");
        auto out = reconstruct_prop_R(pm_from_matrix(a), a.labels());
        write_json(c.out, matrix_to_json(out));
        return 0;
    });
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"principal minor assignment tools"};
    app.require_subcommand(1);
    Config c;
    std::vector<CLI::Option*> seed_opts;
    auto seed_opt = [&](CLI::App* s, bool required) {
        auto* o = s->add_option("--seed", c.seed, "random seed");
        seed_opts.push_back(o);
        if (required) o->required();
    };

    auto* gen = app.add_subcommand("gen", "generate a random instance");
    gen->add_option("--kind", c.kind, "dense | cut | rod")->check(CLI::IsMember({"dense", "cut", "rod"}));
    gen->add_option("--n", c.n, "dimension")->required();
    gen->add_option("--r", c.r, "ROD matrix size (default n)");
    gen->add_option("--split", c.split, "planted cut sizes")->delimiter(',');
    gen->add_option("--field", c.field, "'rational' or a prime modulus (default choose_prime(n))");
    gen->add_option("--out", c.out, "output file (default stdout)");
    seed_opt(gen, true);

    auto* solve = app.add_subcommand("solve-pmap", "black-box PMAP");
    solve->add_option("--in", c.in)->required();
    solve->add_option("--out", c.out);
    solve->add_option("--stats", c.stats);
    solve->add_flag("--oracle-only", c.oracle_only, "solver reads A only through det(A+Y)");
    seed_opt(solve, true);

    auto* learn = app.add_subcommand("learn-rod", "learn a read-once determinant");
    learn->add_option("--in", c.in)->required();
    learn->add_option("--out", c.out);
    seed_opt(learn, true);

    auto add_pme = [&](CLI::App* s, const char* method_flag) {
        s->add_option("--a", c.a)->required();
        s->add_option("--b", c.b)->required();
        s->add_option(method_flag, c.method, "det | brute | rand")->check(CLI::IsMember({"det", "brute", "rand"}));
        s->add_option("--samples", c.samples);
        seed_opt(s, false);
    };
    auto* tp = app.add_subcommand("test-pme", "principal minor equivalence test");
    add_pme(tp, "--method");
    auto* ver = app.add_subcommand("verify", "check two matrices for PME");
    add_pme(ver, "--mode");

    auto* fc = app.add_subcommand("find-cut", "find a cut");
    fc->add_option("--in", c.in)->required();
    fc->add_flag("--blackbox", c.blackbox, "use principal minors only");

    auto* rc = app.add_subcommand("reconstruct", "PMAP for a matrix with property R");
    rc->add_option("--in", c.in)->required();
    rc->add_option("--out", c.out);
    rc->add_flag("--assume-prop-r", c.assume_prop_r);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc_ = app.exit(e);
        return rc_ == 0 ? 0 : 2;
    }
    for (auto* o : seed_opts)
        if (o->count()) c.seed_given = true;

    try {
        if (gen->parsed()) return cmd_gen(c);
        if (solve->parsed()) return cmd_solve_pmap(c);
        if (learn->parsed()) return cmd_learn_rod(c);
        if (tp->parsed() || ver->parsed()) return cmd_test_pme(c);
        if (fc->parsed()) return cmd_find_cut(c);
        if (rc->parsed()) return cmd_reconstruct(c);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
