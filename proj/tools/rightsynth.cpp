// rightsynth: realizability checks, strategy synthesis and play for specs
// with duties and rights.
//
// Exit codes: 0 realizable (or accepted), 1 unrealizable (or rejected),
// 2 environment spec without a strategy, 3 input error.

#include "rsyn/cli.hpp"
#include "rsyn/errors.hpp"

#include "CLI11.hpp"

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace rsyn;
namespace fs = std::filesystem;

namespace {

enum Exit { Realizable = 0, Unrealizable = 1, EnvFails = 2, InputError = 3 };

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out)
        throw Error("cannot write " + p.string());
    out << text;
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

struct Common {
    std::string spec;
    bool reserved_stop = false;
    bool lazy_rights = false;

    SynthOptions options() const {
        SynthOptions o;
        o.reserved_stop = reserved_stop;
        o.lazy_rights = lazy_rights;
        return o;
    }
};

void add_common(CLI::App* cmd, Common& c, bool spec_required = true) {
    auto* opt = cmd->add_option("spec", c.spec, "spec file");
    if (spec_required)
        opt->required();
    cmd->add_flag("--reserved-stop", c.reserved_stop, "append a fresh agent proposition meaning stop");
    cmd->add_flag("--lazy-rights", c.lazy_rights, "build further-right transducers on demand");
}

const FurtherBlock& further_block(const SpecFile& spec, const std::string& name) {
    const FurtherBlock* f = spec.find_further(name);
    if (!f)
        throw Error("no further block named '" + name + "'");
    return *f;
}

FurtherResult further(const SpecFile& spec, const SynthesisResult& res, const std::string& name,
                      const SynthOptions& opt) {
    const FurtherBlock& f = further_block(spec, name);
    return synthesize_further({spec.problem, f.duty, f.right, f.at, false}, res, opt);
}

int cmd_check(const Common& c, const std::string& further_name) {
    SpecFile spec = load_spec(c.spec);
    SynthesisResult res = synthesize(spec.problem, c.options());
    std::cout << (res.realizable ? "REALIZABLE" : "UNREALIZABLE") << "\n";
    std::cout << "env automaton: " << res.env_dfa.num_states << " states, restricted arena "
              << res.env_arena.arena.num_states << "\n";
    std::cout << "duty automaton: " << res.duty_dfa.num_states << " states\n";
    std::cout << "right automaton: " << res.right_dfa.num_states << " states\n";
    std::cout << "product: " << res.product->dfa.num_states << " states\n";
    std::cout << "Agn_r: " << res.agn_r.size() << " states, " << res.agn_r.layers.size() << " layers\n";
    if (res.realizable)
        std::cout << "Agn: " << res.agn.size() << " states, " << res.agn.layers.size() << " layers\n";
    if (!res.realizable)
        return Unrealizable;
    if (further_name.empty())
        return Realizable;
    FurtherResult fr = further(spec, res, further_name, c.options());
    if (!fr.realizable) {
        std::cout << "further " << further_name << ": REJECTED (" << fr.reason << ")\n";
        return Unrealizable;
    }
    std::cout << "further " << further_name << ": ACCEPTED\n";
    std::cout << "further arena: " << fr.arena->dfa.num_states << " states, Agn_r&fr "
              << fr.agn_rfr.size() << " states\n";
    return Realizable;
}

nlohmann::json set_json(const StateSet& s) {
    auto j = nlohmann::json::array();
    for (std::size_t q = 0; q < s.size(); ++q)
        if (s[q])
            j.push_back(q);
    return j;
}

int cmd_synth(const Common& c, const std::string& out_dir, const std::string& further_name) {
    SpecFile spec = load_spec(c.spec);
    SynthOptions opt = c.options();
    SynthesisResult res = synthesize(spec.problem, opt);
    if (!res.realizable) {
        std::cerr << "UNREALIZABLE: no files written\n";
        return Unrealizable;
    }
    std::optional<FurtherResult> fr;
    if (!further_name.empty()) {
        fr = further(spec, res, further_name, opt);
        if (!fr->realizable) {
            std::cerr << "further " << further_name << " REJECTED (" << fr->reason << "): no files written\n";
            return Unrealizable;
        }
    }
    fs::path dir(out_dir);
    fs::create_directories(dir);
    write_file(dir / "T.json", dump(to_json(tabulate(*res.duty_transducer))));
    write_file(dir / "T_r.json", dump(to_json(tabulate(*res.rights_transducer))));
    write_file(dir / "product.dot", to_dot(res.product->dfa, "product"));
    nlohmann::json regions = {{"agn_r", to_json(res.agn_r)},
                              {"agn", to_json(res.agn)},
                              {"r_d", set_json(res.r_d)},
                              {"r_r", set_json(res.r_r)}};
    write_file(dir / "regions.json", dump(regions));
    std::cout << "wrote T.json, T_r.json, product.dot, regions.json to " << dir.string() << "\n";
    if (fr) {
        const std::pair<RightsChoice, const char*> files[] = {{RightsChoice::None, "T_hat.json"},
                                                             {RightsChoice::Right, "T_hat_r.json"},
                                                             {RightsChoice::FurtherRight, "T_hat_fr.json"},
                                                             {RightsChoice::Both, "T_hat_rfr.json"}};
        for (const auto& [choice, name] : files)
            write_file(dir / name, dump(to_json(tabulate(*fr->transducer(choice)))));
        std::cout << "wrote T_hat.json, T_hat_r.json, T_hat_fr.json, T_hat_rfr.json\n";
    }
    return Realizable;
}

int cmd_export(const Common& c, const std::string& what, const std::string& format, const std::string& out) {
    SpecFile spec = load_spec(c.spec);
    SynthesisResult res = synthesize(spec.problem, c.options());
    std::string text;
    if (what == "T" || what == "T_r") {
        if (!res.realizable) {
            std::cerr << "UNREALIZABLE: no strategy to export\n";
            return Unrealizable;
        }
        const Transducer& t = what == "T" ? *res.duty_transducer : *res.rights_transducer;
        text = format == "dot" ? strategy_dot(t, what) : dump(to_json(tabulate(t)));
    } else {
        const Dfa* d = what == "env"       ? &res.env_dfa
                       : what == "arena"   ? &res.env_arena.arena
                       : what == "duty"    ? &res.duty_dfa
                       : what == "right"   ? &res.right_dfa
                       : what == "product" ? &res.product->dfa
                                           : nullptr;
        if (!d)
            throw Error("unknown export target '" + what + "'");
        text = format == "dot" ? to_dot(*d, what) : dump(to_json(*d));
    }
    if (out.empty())
        std::cout << text;
    else
        write_file(out, text);
    return res.realizable ? Realizable : Unrealizable;
}

HttpServer* active_server = nullptr;

void on_signal(int) {
    if (active_server)
        active_server->stop();
}

int cmd_serve(const std::string& addr) {
    auto colon = addr.rfind(':');
    if (colon == std::string::npos)
        throw Error("--serve expects HOST:PORT");
    std::string host = addr.substr(0, colon);
    int port = std::stoi(addr.substr(colon + 1));
    SessionService service;
    HttpServer server(service);
    int bound = server.bind(host, port);
    std::cout << "serving sessions on http://" << host << ":" << bound << std::endl;
    active_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    server.listen();
    active_server = nullptr;
    return 0;
}

int cmd_play(const Common& c, const std::string& script_path, std::optional<std::uint64_t> seed) {
    SpecFile spec = load_spec(c.spec);
    auto res = std::make_shared<const SynthesisResult>(synthesize(spec.problem, c.options()));
    if (!res->realizable) {
        std::cerr << "UNREALIZABLE: nothing to play\n";
        return Unrealizable;
    }
    PlayScript script;
    if (!script_path.empty())
        script = parse_script(read_file(script_path), spec);
    if (seed) {
        script.fallback = PlayScript::Random;
        script.seed = *seed;
    } else if (script_path.empty()) {
        script.fallback = PlayScript::First;
    }
    Session s(res);
    auto policy = script.policy();
    PlayRecord r = run_to_completion(s, *policy, script.events);
    std::cout << dump(to_json(r, res->props));
    return Realizable;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Synthesis of strategies for LTLf duties with rights"};
    app.require_subcommand(1);
    Common common;

    std::string further_name;
    auto* check = app.add_subcommand("check", "report realizability and automaton sizes");
    add_common(check, common);
    check->add_option("--further", further_name, "also check the named further block");

    std::string out_dir = ".";
    auto* synth = app.add_subcommand("synth", "write T.json, T_r.json, product.dot and regions.json");
    add_common(synth, common);
    synth->add_option("-o,--out", out_dir, "output directory");
    synth->add_option("--further", further_name, "also write the transducers of a further block");

    std::string what = "T", format = "json", out_file;
    auto* exp = app.add_subcommand("export", "print one automaton or transducer");
    add_common(exp, common);
    exp->add_option("--what", what, "env, arena, duty, right, product, T or T_r")
        ->check(CLI::IsMember({"env", "arena", "duty", "right", "product", "T", "T_r"}));
    exp->add_option("--format", format, "json or dot")->check(CLI::IsMember({"json", "dot"}));
    exp->add_option("-o,--out", out_file, "output file instead of stdout");

    std::string script_path, serve_addr;
    std::optional<std::uint64_t> seed;
    auto* play = app.add_subcommand("play", "play a session from a script, or serve sessions over HTTP");
    add_common(play, common, false);
    play->add_option("--script", script_path, "event script");
    play->add_option("--random", seed, "random environment with this seed once the script ends");
    play->add_option("--serve", serve_addr, "serve the session protocol on HOST:PORT");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : InputError;
    }

    try {
        if (*check)
            return cmd_check(common, further_name);
        if (*synth)
            return cmd_synth(common, out_dir, further_name);
        if (*exp)
            return cmd_export(common, what, format, out_file);
        if (!serve_addr.empty())
            return cmd_serve(serve_addr);
        if (common.spec.empty())
            throw Error("play needs a spec file unless --serve is given");
        return cmd_play(common, script_path, seed);
    } catch (const EnvUnrealizable& e) {
        std::cerr << "ENV-UNREALIZABLE: " << e.what() << "\n";
        return EnvFails;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return InputError;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return InputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return InputError;
    }
}
