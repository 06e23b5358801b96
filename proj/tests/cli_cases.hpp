// Golden CLI transcripts: each case's stdout and exit code are stored under
// tests/golden/<name>.txt. "@DATA@" expands to tests/data.
#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mlkit/cli.hpp"

namespace golden {

struct Case {
  const char* name;
  std::vector<std::string> args;
};

inline const std::vector<Case>& cases() {
  static const std::vector<Case> all{
      {"curve_info_rank1", {"--spec", "@DATA@/curve_0_-2.json", "curve-info"}},
      {"curve_info_torsion", {"--machine", "--spec", "@DATA@/curve_0_1.json", "curve-info"}},
      {"curve_info_two_ovals", {"--spec", "@DATA@/curve_-1_0.json", "curve-info"}},
      {"curve_info_circle", {"--machine", "--spec", "@DATA@/circle.json", "curve-info"}},
      {"point_add", {"--machine", "--spec", "@DATA@/curve_0_-2.json", "point", "add", "(3, 5)", "(3, 5)"}},
      {"point_add_human", {"--spec", "@DATA@/curve_0_-2.json", "point", "add", "(3, 5)", "(3, -5)"}},
      {"point_mul", {"--machine", "--spec", "@DATA@/curve_0_1.json", "point", "mul", "6", "(2, 3)"}},
      {"point_decompose", {"--machine", "--spec", "@DATA@/curve_0_-2.json", "point", "decompose", "(129/100, -383/1000)"}},
      {"point_off_curve", {"--spec", "@DATA@/curve_0_-2.json", "point", "add", "(1, 1)", "O"}},
      {"coset_dke", {"--machine", "--spec", "@DATA@/curve_0_-2.json", "coset", "dke", "--k", "2", "--e", "4"}},
      {"coset_dke_pair", {"--spec", "@DATA@/curve_0_-2.json", "coset", "dke", "--k", "1,1", "--e", "2"}},
      {"coset_kernel", {"--machine", "--spec", "@DATA@/curve_0_-2.json", "coset", "kernel", "--k", "1,-1"}},
      {"coset_intersect",
       {"--machine", "--spec", "@DATA@/curve_0_-2.json", "coset", "combine", "--op", "intersect", "--left",
        "mod 2: {[0]}", "--right", "mod 3: {[0]}"}},
      {"coset_complement",
       {"--spec", "@DATA@/curve_0_-2.json", "coset", "combine", "--op", "complement", "--left", "mod 3: {[0]}"}},
      {"coset_member",
       {"--machine", "--spec", "@DATA@/curve_0_-2.json", "coset", "member", "--k", "2", "--e", "4", "(3, 5)"}},
      {"coset_ceiling",
       {"--ceiling", "10", "--spec", "@DATA@/curve_0_-2.json", "coset", "dke", "--k", "1,1,1", "--e", "4"}},
      {"ml_solve", {"--machine", "--bound", "2", "--spec", "@DATA@/curve_0_-2.json", "ml", "solve", "--poly",
                    "(- x1 x3)", "--n", "2"}},
      {"ml_verify", {"--machine", "--bound", "3", "--spec", "@DATA@/curve_0_-2.json", "ml", "verify", "--poly",
                     "(- x1 x3)", "--n", "2", "--decomp",
                     R"([{"base":[[0],[0]],"k":[1,-1]},{"base":[[0],[0]],"k":[1,1]}])"}},
      {"ml_verify_missing", {"--bound", "3", "--spec", "@DATA@/curve_0_-2.json", "ml", "verify", "--poly", "(- x1 x3)",
                             "--n", "2", "--decomp", R"([{"base":[[0],[0]],"k":[1,-1]}])"}},
      {"ml_suggest", {"--machine", "--bound", "3", "--spec", "@DATA@/curve_0_-2.json", "ml", "suggest", "--poly",
                      "(- x1 x3)", "--n", "2"}},
      {"eval_true", {"--machine", "--bound", "4", "--spec", "@DATA@/curve_0_-2.json", "eval", "--formula",
                     "(exists-gamma 1 (= x1 y1))", "--x", "3"}},
      {"eval_unknown", {"--bound", "4", "--spec", "@DATA@/curve_0_-2.json", "eval", "--formula",
                        "(exists-gamma 1 (= x1 y1))", "--x", "2"}},
      {"eval_not", {"--bound", "4", "--spec", "@DATA@/curve_0_-2.json", "eval", "--formula",
                    "(not (exists-gamma 1 (= x1 y1)))", "--x", "3"}},
      {"eval_syntax_error", {"--spec", "@DATA@/curve_0_-2.json", "eval", "--formula", "(exists-gamma)"}},
      {"density", {"--machine", "--height", "130", "--bins", "4", "--spec", "@DATA@/curve_0_-2.json", "density",
                   "--lo", "-2", "--hi", "6"}},
      {"density_subset", {"--height", "130", "--bins", "2", "--spec", "@DATA@/curve_0_-2.json", "density", "--lo",
                          "0", "--hi", "2", "--k", "2", "--e", "4"}},
      {"axioms", {"--machine", "--height", "40", "--bound", "3", "--spec", "@DATA@/curve_0_-2.json", "axioms",
                  "--nmax", "3", "--grid", "4"}},
      {"axioms_wrong_gamma", {"--height", "40", "--bound", "2", "--spec", "@DATA@/wrong_gamma.json", "axioms",
                              "--nmax", "2", "--grid", "3"}},
      {"axioms_torsion", {"--machine", "--height", "30", "--spec", "@DATA@/curve_0_1.json", "axioms", "--nmax", "2"}},
      {"singular_spec", {"--spec", "@DATA@/singular.json", "curve-info"}},
      {"missing_spec", {"--spec", "@DATA@/does_not_exist.json", "curve-info"}},
  };
  return all;
}

struct Outcome {
  int code = 0;
  std::string out;
  std::string transcript() const { return out + "[exit " + std::to_string(code) + "]\n"; }
};

inline Outcome run(const Case& c, const std::filesystem::path& data_dir, const std::vector<std::string>& extra) {
  std::vector<std::string> args = extra;
  for (std::string a : c.args) {
    if (const auto at = a.find("@DATA@"); at != std::string::npos) a.replace(at, 6, data_dir.string());
    args.push_back(std::move(a));
  }
  std::ostringstream out, err;
  Outcome o;
  o.code = mlkit::run_cli(args, out, err);
  o.out = out.str();
  return o;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace golden
