#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "io.hpp"

using namespace canonconn;

int main(int argc, char** argv) {
  CLI::App app{"Exact canonical connections of sub-Riemannian manifolds with constant symbol"};
  app.require_subcommand(1);
  std::string out_path;
  app.add_option("--out", out_path, "write the JSON report here instead of stdout");

  std::string algebra, kappa, frame;
  std::size_t k = 0;
  auto* check = app.add_subcommand("check", "validate a Carnot algebra, report g_0 and rigidity");
  check->add_option("algebra", algebra)->required();
  auto* cplx = app.add_subcommand("complex", "dimensions and identity checks of C^k");
  cplx->add_option("algebra", algebra)->required();
  cplx->add_option("--k", k, "form degree")->required();
  auto* norm = app.add_subcommand("normalize", "solve the degree-1 normalization for a given kappa~_1");
  norm->add_option("algebra", algebra)->required();
  norm->add_option("kappa", kappa)->required();
  auto* frm = app.add_subcommand("frame", "canonical connection of a polynomial frame at its base point");
  frm->add_option("frame", frame)->required();
  for (auto* sub : {check, cplx, norm, frm}) sub->add_option("--out", out_path, "write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  io::Outcome res;
  if (*check)
    res = io::cmd_check(algebra);
  else if (*cplx)
    res = io::cmd_complex(algebra, k);
  else if (*norm)
    res = io::cmd_normalize(algebra, kappa);
  else
    res = io::cmd_frame(frame);

  std::string text = io::serialize(res.report);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
      std::cerr << "cannot write " << out_path << "\n";
      return 1;
    }
    f << text;
  }
  if (auto it = res.report.find("error"); it != res.report.end())
    std::cerr << (*it)["message"].get<std::string>() << "\n";
  return res.exit_code;
}
