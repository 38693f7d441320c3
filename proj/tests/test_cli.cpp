#include <catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#ifndef NOMDIAG_CLI
#error "NOMDIAG_CLI must name the built binary"
#endif

namespace fs = std::filesystem;

namespace {
struct Run {
    int code = -1;
    std::string out;
};

Run cli(const std::string& args) {
    std::string cmd = std::string(NOMDIAG_CLI) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p);
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

class Scratch {
public:
    Scratch() : dir_(fs::temp_directory_path() / ("nomdiag_cli_" + std::to_string(getpid()))) {
        fs::create_directories(dir_);
    }
    ~Scratch() { fs::remove_all(dir_); }
    std::string file(const std::string& name, const std::string& text) const {
        fs::path p = dir_ / name;
        std::ofstream(p) << text;
        return p.string();
    }

private:
    fs::path dir_;
};
} // namespace

TEST_CASE("check") {
    Scratch s;
    Run r = cli("check " + s.file("chain", "d(a>b) ; d(b>c)"));
    CHECK(r.code == 0);
    CHECK(r.out == "{a} -> {c}\n");
    CHECK(cli("check " + s.file("nil", "nil")).out == "{} -> {}\n");
    CHECK(cli("check " + s.file("overlap", "d(a>b) | d(a>c)")).code == 2);
    CHECK(cli("check " + s.file("broken", "d(a>b")).code == 3);
    CHECK(cli("check " + s.file("machine", "d(_0>b)")).code == 0);
    CHECK(cli("check /nonexistent/term").code == 3);
    CHECK(cli("--theory B check " + s.file("ord", "id + id ; sym")).out == "2 -> 2\n");
    CHECK(cli("--theory nS check " + s.file("bad_gen", "m(a>c)")).code == 2);
    CHECK(cli("").code == 3); // no subcommand
}

TEST_CASE("eval and normalize") {
    Scratch s;
    std::string swap = s.file("swap", "d(a>b) | d(b>a)");
    Run r = cli("--theory nB eval " + swap);
    CHECK(r.code == 0);
    CHECK(r.out == "{\"kind\":\"bij\",\"dom\":[\"a\",\"b\"],\"cod\":[\"a\",\"b\"],\"pairs\":[[\"a\",\"b\"],[\"b\",\"a\"]]}\n");
    CHECK(cli("--theory nB eval " + swap).out == r.out);
    CHECK(cli("--theory nB normalize " + s.file("chain", "d(a>x) ; d(x>b)")).out == "d(a>b)\n");
    CHECK(cli("--theory nB normalize " + s.file("nil", "nil")).out == "nil\n");
    CHECK(cli("--theory nB eval " + s.file("merge", "m(a,b>c)")).code == 2);
    Run o = cli("--theory S eval " + s.file("m", "m"));
    CHECK(o.out == "{\"kind\":\"surj\",\"dom\":2,\"cod\":1,\"pairs\":[[0,0],[1,0]]}\n");
}

TEST_CASE("eq") {
    Scratch s;
    std::string swap = s.file("swap", "d(a>b) | d(b>a)");
    std::string fresh = s.file("fresh", "(d(a>x) ; d(x>b)) | d(b>a)");
    CHECK(cli("--theory nB eq " + swap + " " + fresh).out == "equal\n");
    Run ne = cli("--theory nB eq " + swap + " " + s.file("ident", "id(a) | id(b)"));
    CHECK(ne.code == 1);
    CHECK(ne.out == "not-equal\n");

    std::string m1 = s.file("m1", "m(a,b>c)"), m2 = s.file("m2", "m(b,a>c)");
    Run d = cli("--theory nS eq --derive " + m1 + " " + m2);
    CHECK(d.code == 0);
    CHECK(d.out.rfind("equal\n", 0) == 0);
    CHECK(d.out.find("merge-comm") != std::string::npos);
    Run b = cli("--theory nS eq --derive --depth 0 " + m1 + " " + m2);
    CHECK(b.code == 4);
    CHECK(b.out.find("no derivation") != std::string::npos);

    // free signature: alpha-equivalence
    std::string sig = s.file("sig", "g : 1 -> 1\n");
    CHECK(cli("--theory nfree --sig " + sig + " eq " + s.file("gx", "g(a>x) ; g(x>b)") + " " +
              s.file("gy", "g(a>y) ; g(y>b)"))
              .code == 0);
    CHECK(cli("--theory nfree --sig " + sig + " eq " + s.file("g1", "g(a>b)") + " " + s.file("g2", "g(a>x) ; g(x>b)"))
              .code == 1);
}

TEST_CASE("translate") {
    Scratch s;
    Run n = cli("--theory B translate --dir nom --in a,b --out c,d " + s.file("sym", "sym"));
    CHECK(n.code == 0);
    CHECK(n.out == "d(a>d) | d(b>c)\n");
    Run o = cli("--theory nB translate --dir ord " + s.file("swap", "d(a>b) | d(b>a)"));
    CHECK(o.code == 0);
    CHECK(o.out.find("sym") != std::string::npos);
    CHECK(cli("--theory B translate --dir nom --in a " + s.file("sym2", "sym")).code == 2);
    CHECK(cli("--theory B translate --dir sideways " + s.file("sym3", "sym")).code == 3);
}

TEST_CASE("render and subst") {
    Scratch s;
    std::string t = s.file("t", "g(a>x) ; g(x>b)"), sig = s.file("sig", "g : 1 -> 1\n");
    Run r = cli("--theory nfree --sig " + sig + " render " + t);
    CHECK(r.code == 0);
    CHECK(r.out.find("g0 -> g1 [label=\"x\"];") != std::string::npos);
    CHECK(cli("--theory nfree --sig " + sig + " render " + t).out == r.out);
    CHECK(cli("--theory nfree render " + t).code == 2); // g is not declared

    std::string sub = s.file("sub", "[a>b] | [c>d]");
    Run a = cli("subst " + sub + " --apply a,c");
    CHECK(a.code == 0);
    CHECK(a.out == "b,d\n");
    CHECK(cli("subst " + s.file("idsub", "id(a) | id(c)") + " --apply c,a").out == "c,a\n");
    CHECK(cli("subst " + sub + " --apply e").code == 2);
}

TEST_CASE("soundness command") {
    Run r = cli("--theory nF soundness --seed 5 --samples 20");
    CHECK(r.code == 0);
    CHECK(r.out.find("sound\n") != std::string::npos);
    CHECK(r.out.find("merge-unit: 20 instances") != std::string::npos);
    CHECK(cli("--theory nF soundness --samples 20").code == 3); // the seed is mandatory
}
