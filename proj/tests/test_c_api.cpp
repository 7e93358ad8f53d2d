#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>

#include "fcool/fcool.h"

TEST_CASE("status strings and version") {
  CHECK(std::string(fc_status_string(FC_OK)) == "ok");
  CHECK(std::string(fc_status_string(FC_ERR_INFEASIBLE)) == "infeasible");
  CHECK(std::strlen(fc_version()) > 0);
}

TEST_CASE("problem handles") {
  fc_problem* p = nullptr;
  CHECK(fc_problem_create(1.0, 0, 0.0, FC_BOUND_UNBOUNDED, &p) == FC_ERR_INVALID_ARGUMENT);
  CHECK(p == nullptr);
  CHECK(std::strlen(fc_last_error()) > 0);
  REQUIRE(fc_problem_create(10.0, 1, 49.5, FC_BOUND_SYMMETRIC_UNIT, &p) == FC_OK);
  CHECK(std::strlen(fc_last_error()) == 0);
  CHECK(fc_problem_gamma(p) == 10.0);
  double h = 0.0;
  CHECK(fc_problem_horizon(p, &h) == 1);
  CHECK(h == 49.5);
  CHECK(fc_problem_bound_mode(p) == FC_BOUND_SYMMETRIC_UNIT);
  fc_problem_destroy(p);
  fc_problem_destroy(nullptr);
  CHECK(fc_problem_create(10.0, 0, 0.0, FC_BOUND_UNBOUNDED, nullptr) == FC_ERR_INVALID_ARGUMENT);
}

TEST_CASE("protocol handles") {
  fc_protocol* q = nullptr;
  REQUIRE(fc_protocol_create(&q) == FC_OK);
  CHECK(fc_protocol_add_impulse(q, -1.0) == FC_OK);
  CHECK(fc_protocol_add_singular(q, 49.5) == FC_OK);
  CHECK(fc_protocol_add_bang(q, 0.5, 1.0) == FC_ERR_INVALID_ARGUMENT);
  CHECK(fc_protocol_add_impulse(q, 0.01) == FC_OK);
  CHECK(fc_protocol_segment_count(q) == 3);
  CHECK(fc_protocol_duration(q) == doctest::Approx(49.5));
  fc_segment s;
  REQUIRE(fc_protocol_segment(q, 1, &s) == FC_OK);
  CHECK(s.kind == FC_SEGMENT_SINGULAR);
  CHECK(s.duration == 49.5);
  CHECK(fc_protocol_segment(q, 3, &s) == FC_ERR_INVALID_ARGUMENT);
  fc_protocol_destroy(q);
}

TEST_CASE("syntheses through the C interface") {
  fc_unbounded_summary u;
  fc_protocol* q = nullptr;
  REQUIRE(fc_unbounded_synthesize(10.0, 49.5, &u, &q) == FC_OK);
  CHECK(std::abs(u.c) < 1e-15);
  CHECK(u.initial_weight == doctest::Approx(-1.0));
  CHECK(u.terminal_velocity == doctest::Approx(0.1));
  CHECK(u.average_energy == doctest::Approx(99.0 * std::log(10.0) / 2450.25));

  fc_problem* p = nullptr;
  REQUIRE(fc_problem_create(10.0, 1, 49.5, FC_BOUND_UNBOUNDED, &p) == FC_OK);
  fc_trajectory* t = nullptr;
  REQUIRE(fc_simulate(p, q, nullptr, &t) == FC_OK);
  CHECK(fc_trajectory_size(t) > 1000);
  fc_sample last;
  REQUIRE(fc_trajectory_sample(t, fc_trajectory_size(t) - 1, &last) == FC_OK);
  CHECK(last.x1 == doctest::Approx(10.0).epsilon(1e-9));
  CHECK(fc_trajectory_average_energy(t) == doctest::Approx(u.average_energy).epsilon(1e-6));
  fc_boundary_report br;
  REQUIRE(fc_trajectory_boundary(t, 10.0, &br) == FC_OK);
  CHECK(br.final_position < 1e-6);
  double res = 1.0;
  REQUIRE(fc_trajectory_residual(t, q, &res) == FC_OK);
  CHECK(res < 1e-5);
  fc_text* csv = nullptr;
  REQUIRE(fc_trajectory_write_csv(t, &csv) == FC_OK);
  CHECK(std::string(fc_text_data(csv)).rfind("t,x1,x2,u,running_J\n", 0) == 0);
  fc_text_destroy(csv);

  fc_text* doc = nullptr;
  REQUIRE(fc_document_write(p, q, &doc) == FC_OK);
  fc_problem* p2 = nullptr;
  fc_protocol* q2 = nullptr;
  REQUIRE(fc_document_parse(fc_text_data(doc), fc_text_size(doc), &p2, &q2) == FC_OK);
  CHECK(fc_protocol_segment_count(q2) == 3);
  CHECK(fc_document_parse("{", 1, &p2, &q2) == FC_ERR_PARSE);
  fc_text_destroy(doc);
  fc_problem_destroy(p2);
  fc_protocol_destroy(q2);
  fc_trajectory_destroy(t);
  fc_problem_destroy(p);
  fc_protocol_destroy(q);

  double x1 = 0, x2 = 0;
  REQUIRE(fc_singular_state(10.0, 49.5, 24.75, &x1, &x2) == FC_OK);
  CHECK(x1 == doctest::Approx(std::sqrt(50.5)));
  double t_star = 0, c = 1;
  REQUIRE(fc_free_time_optimum(10.0, &t_star, &c) == FC_OK);
  CHECK(t_star == 49.5);
}

TEST_CASE("bounded syntheses through the C interface") {
  fc_min_time_summary m;
  REQUIRE(fc_min_time(10.0, &m, nullptr) == FC_OK);
  CHECK(m.T_min == doctest::Approx(3.087983256391494));
  fc_bounded_summary b;
  REQUIRE(fc_bounded_synthesize(10.0, 20.0, &b, nullptr) == FC_OK);
  CHECK(b.T1 + b.T2 + b.T3 == doctest::Approx(20.0));
  CHECK(fc_bounded_synthesize(10.0, 2.0, &b, nullptr) == FC_ERR_INFEASIBLE);
  CHECK(fc_bounded_synthesize(10.0, 60.0, &b, nullptr) == FC_ERR_UNSUPPORTED_REGION);
  double x1 = 0, x2 = 0;
  REQUIRE(fc_bounded_state(10.0, 20.0, 20.0, &x1, &x2) == FC_OK);
  CHECK(x1 == doctest::Approx(10.0));
  int above = 0;
  REQUIRE(fc_joint_above_c0_arc(10.0, &above) == FC_OK);
  CHECK(above == 1);
}

TEST_CASE("reports through the C interface") {
  fc_text* json = nullptr;
  int passed = 0;
  REQUIRE(fc_pmp_report(10.0, 0, 0.0, 20, 3, &json, &passed) == FC_OK);
  CHECK(passed == 1);
  CHECK(std::string(fc_text_data(json)).find("\"hyperbolicity\"") != std::string::npos);
  fc_text_destroy(json);

  fc_verify_options vo;
  fc_verify_options_default(&vo);
  const char* bad = "{\"gamma\": 10, \"segments\": [";
  vo.protocol_json = bad;
  vo.protocol_json_length = std::strlen(bad);
  CHECK(fc_verify(&vo, &json, &passed) == FC_ERR_PARSE);

  fc_schrodinger_options so;
  fc_schrodinger_options_default(&so);
  CHECK(so.gamma == 3.0);
  CHECK(so.points == 4096);
  so.gamma = 2.0;
  so.points = 512;
  so.steps = 5000;
  const double times[] = {0.5};
  so.snapshot_times = times;
  so.snapshot_count = 1;
  fc_text* snaps = nullptr;
  REQUIRE(fc_schrodinger_run(&so, &json, &snaps, &passed) == FC_OK);
  CHECK(std::string(fc_text_data(json)).find("final_fidelity") != std::string::npos);
  CHECK(fc_text_size(snaps) > 512 * 10);
  fc_text_destroy(json);
  fc_text_destroy(snaps);
}
