#include <catch2/catch.hpp>

#include "mmwlink/gf256.hpp"
#include "mmwlink/rng.hpp"

using namespace mmwlink;

namespace {

// Independent inverse: exhaustive search over the 256 elements.
uint8_t brute_force_inverse(uint8_t a)
{
    for (int b = 0; b < 256; ++b)
        if (gf::mul(a, static_cast<uint8_t>(b)) == 1)
            return static_cast<uint8_t>(b);
    FAIL("no inverse found");
    return 0;
}

} // namespace

TEST_CASE("gf256: zero annihilates and one is identity")
{
    Rng rng(7);
    for (int i = 0; i < 64; ++i) {
        const auto x = static_cast<uint8_t>(rng.uniform_int(256));
        CHECK(gf::mul(0, x) == 0);
        CHECK(gf::mul(x, 0) == 0);
        CHECK(gf::mul(1, x) == x);
        CHECK(gf::mul(x, 1) == x);
    }
}

TEST_CASE("gf256: addition is self-inverse")
{
    for (int a = 0; a < 256; ++a)
        CHECK(gf::add(static_cast<uint8_t>(a), static_cast<uint8_t>(a)) == 0);
}

TEST_CASE("gf256: inv matches exhaustive search on 200 random elements")
{
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        const auto a = static_cast<uint8_t>(1 + rng.uniform_int(255));
        CHECK(gf::inv(a) == brute_force_inverse(a));
        CHECK(gf::mul(a, gf::inv(a)) == 1);
    }
}

TEST_CASE("gf256: every nonzero element has an inverse")
{
    for (int a = 1; a < 256; ++a)
        CHECK(gf::mul(static_cast<uint8_t>(a), gf::inv(static_cast<uint8_t>(a))) == 1);
}

TEST_CASE("gf256: associativity and distributivity on random triples")
{
    Rng rng(13);
    for (int i = 0; i < 2000; ++i) {
        const auto a = static_cast<uint8_t>(rng.uniform_int(256));
        const auto b = static_cast<uint8_t>(rng.uniform_int(256));
        const auto c = static_cast<uint8_t>(rng.uniform_int(256));
        CHECK(gf::mul(gf::mul(a, b), c) == gf::mul(a, gf::mul(b, c)));
        CHECK(gf::add(gf::add(a, b), c) == gf::add(a, gf::add(b, c)));
        CHECK(gf::mul(a, gf::add(b, c)) == gf::add(gf::mul(a, b), gf::mul(a, c)));
    }
}

TEST_CASE("gf256: alpha has full multiplicative order")
{
    // alpha^i must visit every nonzero element exactly once in 255 steps.
    std::array<bool, 256> seen{};
    for (int i = 0; i < 255; ++i) {
        const uint8_t v = gf::alpha_pow(i);
        CHECK_FALSE(seen[v]);
        seen[v] = true;
    }
    CHECK_FALSE(seen[0]);
    CHECK(gf::alpha_pow(255) == 1);
    CHECK(gf::alpha_pow(-1) == gf::inv(gf::alpha_pow(1)));
}
