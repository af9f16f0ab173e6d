// Copyright 2026 The tlbsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "tlbsim/error.hpp"
#include "tlbsim/sv39.hpp"

using namespace tlbsim;

TEST_CASE("split_vpn slices the three 9-bit fields") {
  Vpn v = split_vpn(VirtAddr{0});
  CHECK(v.vpn2() == 0);
  CHECK(v.vpn1() == 0);
  CHECK(v.vpn0() == 0);

  // All VPN bits set; bit 38 set forces the sign-extended upper bits.
  v = split_vpn(VirtAddr{0xFFFF'FFFF'FFFF'F000ull});
  CHECK(v.vpn2() == 0x1FF);
  CHECK(v.vpn1() == 0x1FF);
  CHECK(v.vpn0() == 0x1FF);

  v = split_vpn(VirtAddr{0x4000'0000ull});
  CHECK(v.vpn2() == 1);
  CHECK(v.vpn1() == 0);
  CHECK(v.vpn0() == 0);
  CHECK(v.value == ((v.vpn2() << 18) | (v.vpn1() << 9) | v.vpn0()));
}

TEST_CASE("canonicality") {
  CHECK(VirtAddr{0x3F'FFFF'FFFFull}.canonical());
  CHECK(VirtAddr{0xFFFF'FFC0'0000'0000ull}.canonical());
  CHECK_FALSE(VirtAddr{0x40'0000'0000ull}.canonical());
  CHECK_FALSE(VirtAddr{0x8000'0000'0000'0000ull}.canonical());
  CHECK_FALSE(VirtAddr{0x7FFF'FFFF'F000ull}.canonical());
  try {
    split_vpn(VirtAddr{0x40'0000'0000ull});
    FAIL("expected a canonicality error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Canonicality);
  }
}

TEST_CASE("page_offset") {
  CHECK(page_offset(VirtAddr{0x1234}, PageSize::Base4K) == 0x234);
  CHECK(page_offset(VirtAddr{0}, PageSize::Giga1G) == 0);
  CHECK(page_offset(VirtAddr{0x0030'0FFF}, PageSize::Mega2M) == 0x10'0FFF);
}

TEST_CASE("compose_pa") {
  Pte leaf{0x80, {.v = true, .r = true}};
  CHECK(compose_pa(leaf, VirtAddr{0x10}, 0).value == 0x80010);

  Pte giga{0x40000, {.v = true, .r = true}};
  CHECK(compose_pa(giga, VirtAddr{0x10}, 2).value == 0x40000ull * 4096 + 0x10);

  Pte mega{0x201, {.v = true, .r = true}};
  try {
    compose_pa(mega, VirtAddr{0x20'0000}, 1);
    FAIL("expected an alignment error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Alignment);
  }

  // 2MB leaf: low 9 PPN bits come from vpn0.
  Pte mega_ok{0x400, {.v = true, .r = true}};
  CHECK(compose_pa(mega_ok, VirtAddr{0x0030'0FFF}, 1).value == (0x400ull << 12) + 0x10'0FFF);
}

TEST_CASE("pte encode/decode") {
  Pte p{0xABCDE, {.v = true, .r = true, .x = true, .a = true}};
  const std::uint64_t raw = p.encode();
  CHECK(raw == ((0xABCDEull << 10) | 0b0100'1011));
  CHECK(Pte::decode(raw) == p);
  CHECK(p.leaf());
  CHECK_FALSE(p.pointer());
  Pte ptr{5, {.v = true}};
  CHECK(ptr.pointer());
  CHECK_FALSE(ptr.leaf());
}

TEST_CASE("page size helpers") {
  CHECK(parse_page_size("4K") == PageSize::Base4K);
  CHECK(parse_page_size("2MB") == PageSize::Mega2M);
  CHECK(parse_page_size("1G") == PageSize::Giga1G);
  CHECK_FALSE(parse_page_size("3M").has_value());
  CHECK(pages_in(PageSize::Mega2M) == 512);
  CHECK(pages_in(PageSize::Giga1G) == 512 * 512);
}

TEST_CASE("property: split/rebuild round trip and field oracle") {
  std::mt19937_64 gen(42);
  for (int i = 0; i < 20000; ++i) {
    std::uint64_t va = gen() & ((1ull << 39) - 1);
    if (va & (1ull << 38)) va |= ~((1ull << 39) - 1);
    const VirtAddr v{va};
    REQUIRE(v.canonical());
    const Vpn vpn = split_vpn(v);
    REQUIRE(rebuild_va(vpn, page_offset(v, PageSize::Base4K)) == v);
    REQUIRE(vpn.vpn0() == oracle::vpn_level(va, 0));
    REQUIRE(vpn.vpn1() == oracle::vpn_level(va, 1));
    REQUIRE(vpn.vpn2() == oracle::vpn_level(va, 2));
    // bijection on aligned addresses
    REQUIRE(split_vpn(rebuild_va(vpn, 0)) == vpn);
  }
}
