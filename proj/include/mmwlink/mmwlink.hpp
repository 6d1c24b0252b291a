#pragma once

// 60 GHz single-carrier link simulator: 875 Mbps DBPSK with RS(255,239)
// framing, correlator-bank synchronization, and 60 GHz channel models.

#include "mmwlink/bits.hpp"
#include "mmwlink/channel.hpp"
#include "mmwlink/config.hpp"
#include "mmwlink/csv.hpp"
#include "mmwlink/framing.hpp"
#include "mmwlink/gf256.hpp"
#include "mmwlink/lfsr.hpp"
#include "mmwlink/link.hpp"
#include "mmwlink/modem.hpp"
#include "mmwlink/rng.hpp"
#include "mmwlink/rs.hpp"
#include "mmwlink/stats.hpp"
#include "mmwlink/sync.hpp"
