#include "support.hpp"

#include "permatch/config.hpp"
#include "permatch/io.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>

using namespace permatch;
using permatch::test::cyc;

namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("permatch_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

} // namespace

TEST_CASE("key-value parsing") {
  const auto kv = parse_key_values("# comment\n"
                                   "n_iter = 500\n"
                                   "\n"
                                   "init = \"identity\"  # trailing\n"
                                   "prior = {family=\"pitman_yor\", theta=1.5, discount=0.25}\n");
  CHECK(kv.at("n_iter") == "500");
  CHECK(kv.at("init") == "identity");
  CHECK(kv.at("prior.family") == "pitman_yor");
  CHECK(kv.at("prior.theta") == "1.5");
  CHECK(kv.at("prior.discount") == "0.25");
  CHECK(kv.count("prior") == 0);
  CHECK_THROWS(parse_key_values("no equals sign\n"));
}

TEST_CASE("sampler configuration") {
  const SamplerConfig d = parse_sampler_config("");
  const SamplerConfig ref;
  CHECK(d.n_iter == ref.n_iter);
  CHECK(d.burn_in == ref.burn_in);
  CHECK(d.thin == ref.thin);
  CHECK(d.family.name() == "dirichlet");

  const SamplerConfig c = parse_sampler_config("n_iter = 300\nburn_in = 50\nthin = 5\nseed = 9\n"
                                               "a0 = 2\nb_xi = 3.5\ntheta_hyperprior = false\n"
                                               "init = \"prior\"\nsave_parent = 0\n"
                                               "prior = {family=\"gnedin\", gamma=0.4}\n");
  CHECK(c.n_iter == 300);
  CHECK(c.burn_in == 50);
  CHECK(c.thin == 5);
  CHECK(c.seed == 9);
  CHECK(c.hyper.a0 == 2.0);
  CHECK(c.hyper.b_xi == 3.5);
  CHECK_FALSE(c.theta_hyperprior);
  CHECK(c.init == InitMode::prior);
  CHECK_FALSE(c.save_parent);
  CHECK(c.family.name() == "gnedin");

  const SamplerConfig back = parse_sampler_config(format_sampler_config(c));
  CHECK(format_sampler_config(back) == format_sampler_config(c));
  CHECK(back.family.to_config_string() == c.family.to_config_string());

  CHECK_THROWS(parse_sampler_config("unknown_key = 1\n"));
  CHECK_THROWS(parse_sampler_config("thin = abc\n"));
  CHECK_THROWS(parse_sampler_config("thin = 0\n"));
  CHECK_THROWS(parse_sampler_config("prior = {family=\"nope\"}\n"));
  CHECK_THROWS(parse_sampler_config("prior = {family=\"dirichlet\", theta=-1}\n"));
  CHECK(fnv1a_hash("") == 14695981039346656037ull);
  CHECK(fnv1a_hash("a") == 0xaf63dc4c8601ec8cull);
}

TEST_CASE("graph reading") {
  const auto dense = parse_graph("0,1,0\n1,0,1\n0,1,0\n");
  CHECK(dense.size() == 3);
  CHECK(dense(0, 1));
  CHECK(dense(2, 1));
  CHECK_FALSE(dense(0, 2));
  CHECK(parse_graph("a,b,c\n0,1,0\n1,0,1\n0,1,0\n") == dense);
  CHECK(parse_graph(format_dense(dense), GraphFormat::dense) == dense);

  const auto edges = parse_graph("1 2\n2 3\n", GraphFormat::edges);
  CHECK(edges == dense);
  const auto padded = parse_graph("1,2\n2,3\n", GraphFormat::edges, 5);
  CHECK(padded.size() == 5);
  CHECK(padded.edge_count() == 2);

  CHECK_THROWS(parse_graph("0,1\n0,0\n", GraphFormat::dense));
  CHECK_THROWS(parse_graph("1,1\n1,0\n", GraphFormat::dense));
  CHECK_THROWS(parse_graph("0,2\n2,0\n", GraphFormat::dense));
  CHECK_THROWS(parse_graph("1 1\n", GraphFormat::edges));
  CHECK_THROWS(parse_graph("1 7\n", GraphFormat::edges, 3));
  CHECK(parse_graph_format("edges") == GraphFormat::edges);
  CHECK_THROWS(parse_graph_format("xml"));

  const fs::path dir = scratch_dir("graph");
  write_text(dir / "g.csv", format_dense(dense));
  CHECK(read_graph(dir / "g.csv") == dense);
  CHECK_THROWS(read_graph(dir / "missing.csv"));
}

TEST_CASE("draw formats") {
  Rng rng(3);
  const std::vector<Permutation> perms{cyc("(1342)"), Permutation::identity(4), cyc("(14)(23)")};
  const fs::path dir = scratch_dir("draws");
  write_text(dir / "pi.draws", format_permutations(perms));
  CHECK(read_permutations(dir / "pi.draws") == perms);

  const auto y = test::random_graph(7, 0.5, rng);
  const std::string bits = upper_triangle_bits(y);
  CHECK(bits.size() == 21);
  CHECK(from_upper_triangle_bits(bits, 7) == y);
  CHECK_THROWS(from_upper_triangle_bits("0101", 7));

  write_text(dir / "z", allocation_to_string(Allocation{0, 1, 0, 2}) + "\n");
  CHECK(read_allocation(dir / "z") == Allocation{0, 1, 0, 2});
}

TEST_CASE("scalar trace round trip") {
  std::vector<TraceRow> rows{{1, 0.1, 0.2, 1.5, -100.25, 3}, {2, 0.125, 0.0625, std::nan(""), -99.5, 4}};
  const auto back = parse_scalars(format_scalars(rows));
  REQUIRE(back.size() == 2);
  CHECK(back[0].iter == 1);
  CHECK(back[0].alpha == 0.1);
  CHECK(back[0].log_joint == -100.25);
  CHECK(back[1].k == 4);
  CHECK(std::isnan(back[1].theta));
}

TEST_CASE("archive round trip") {
  Rng rng(5);
  Graphs g(test::random_graph(5, 0.5, rng), test::random_graph(5, 0.5, rng));
  SamplerConfig c;
  c.n_iter = 40;
  c.burn_in = 10;
  c.thin = 3;
  c.init_sweeps = 5;
  const DrawArchive a = run(g, c, rng);
  const fs::path dir = scratch_dir("archive");
  write_archive(dir, a);
  const DrawArchive b = read_archive(dir);
  CHECK(b.pi == a.pi);
  CHECK(b.parent == a.parent);
  CHECK(b.draw_iters == a.draw_iters);
  CHECK(b.seed == a.seed);
  CHECK(b.config_hash == a.config_hash);
  CHECK(b.config_text == a.config_text);
  REQUIRE(b.trace.size() == a.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    CHECK(b.trace[i].log_joint == a.trace[i].log_joint);
    CHECK(b.trace[i].alpha == a.trace[i].alpha);
    CHECK(b.trace[i].k == a.trace[i].k);
  }
}
