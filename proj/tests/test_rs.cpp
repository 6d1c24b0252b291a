#include <catch2/catch.hpp>

#include <algorithm>

#include "mmwlink/rng.hpp"
#include "mmwlink/rs.hpp"

using namespace mmwlink;

namespace {

ByteVec random_message(Rng& rng)
{
    ByteVec m(rs::kK);
    for (auto& b : m)
        b = static_cast<uint8_t>(rng.uniform_int(256));
    return m;
}

// Error-injection oracle: flip `weight` distinct byte positions by random
// nonzero patterns.
ByteVec corrupt(const ByteVec& code, int weight, Rng& rng)
{
    ByteVec out = code;
    std::vector<int> positions;
    while (static_cast<int>(positions.size()) < weight) {
        const int p = static_cast<int>(rng.uniform_int(rs::kN));
        if (std::find(positions.begin(), positions.end(), p) == positions.end())
            positions.push_back(p);
    }
    for (int p : positions)
        out[static_cast<size_t>(p)] ^= static_cast<uint8_t>(1 + rng.uniform_int(255));
    return out;
}

} // namespace

TEST_CASE("rs: zero message encodes to the zero codeword")
{
    const ByteVec code = rs::encode(ByteVec(rs::kK, 0));
    REQUIRE(code.size() == rs::kN);
    for (uint8_t b : code)
        CHECK(b == 0);
}

TEST_CASE("rs: encoding is systematic and its syndromes vanish")
{
    Rng rng(21);
    for (int trial = 0; trial < 50; ++trial) {
        const ByteVec m = random_message(rng);
        const ByteVec code = rs::encode(m);
        REQUIRE(code.size() == rs::kN);
        CHECK(std::equal(m.begin(), m.end(), code.begin()));
        for (uint8_t s : rs::detail::syndromes(code))
            CHECK(s == 0);
    }
}

TEST_CASE("rs: encoding is linear")
{
    Rng rng(22);
    for (int trial = 0; trial < 20; ++trial) {
        const ByteVec m1 = random_message(rng);
        const ByteVec m2 = random_message(rng);
        ByteVec mx(rs::kK);
        for (int i = 0; i < rs::kK; ++i)
            mx[static_cast<size_t>(i)] = m1[static_cast<size_t>(i)] ^ m2[static_cast<size_t>(i)];
        const ByteVec c1 = rs::encode(m1);
        const ByteVec c2 = rs::encode(m2);
        const ByteVec cx = rs::encode(mx);
        for (int i = 0; i < rs::kN; ++i)
            CHECK(cx[static_cast<size_t>(i)] ==
                  (c1[static_cast<size_t>(i)] ^ c2[static_cast<size_t>(i)]));
    }
}

TEST_CASE("rs: clean codeword decodes with zero corrections")
{
    Rng rng(23);
    const ByteVec m = random_message(rng);
    const auto res = rs::decode(rs::encode(m));
    REQUIRE(res.has_value());
    CHECK(res->message == m);
    CHECK(res->corrected == 0);
}

TEST_CASE("rs: corrects any error pattern of weight up to 8")
{
    Rng rng(24);
    for (int trial = 0; trial < 2000; ++trial) {
        const ByteVec m = random_message(rng);
        const int weight = static_cast<int>(rng.uniform_int(9));
        const auto res = rs::decode(corrupt(rs::encode(m), weight, rng));
        REQUIRE(res.has_value());
        CHECK(res->message == m);
        CHECK(res->corrected == weight);
    }
}

TEST_CASE("rs: exactly 8 corruptions are corrected with count 8")
{
    Rng rng(25);
    for (int trial = 0; trial < 500; ++trial) {
        const ByteVec m = random_message(rng);
        const auto res = rs::decode(corrupt(rs::encode(m), 8, rng));
        REQUIRE(res.has_value());
        CHECK(res->message == m);
        CHECK(res->corrected == 8);
    }
}

TEST_CASE("rs: 20 corruptions fail or are detected in nearly all trials")
{
    Rng rng(26);
    const int trials = 1000;
    int failures = 0;
    int miscorrections = 0;
    for (int trial = 0; trial < trials; ++trial) {
        const ByteVec m = random_message(rng);
        const auto res = rs::decode(corrupt(rs::encode(m), 20, rng));
        if (!res)
            ++failures;
        else if (res->message != m)
            ++miscorrections;
        // a decode back to the original under 20 errors is impossible
    }
    INFO("observed miscorrection rate: " << static_cast<double>(miscorrections) / trials);
    CHECK(failures + miscorrections == trials);
    CHECK(failures >= trials * 99 / 100);
}

TEST_CASE("rs: length preconditions are enforced")
{
    CHECK_THROWS_AS(rs::encode(ByteVec(10, 0)), std::invalid_argument);
    CHECK_THROWS_AS(rs::decode(ByteVec(100, 0)), std::invalid_argument);
}
