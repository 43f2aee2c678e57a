#pragma once

#include "addbasis/asymptotics.hpp"
#include "addbasis/count.hpp"
#include "addbasis/error.hpp"
#include "addbasis/goldbach.hpp"
#include "addbasis/growth.hpp"
#include "addbasis/ntt.hpp"
#include "addbasis/parallel.hpp"
#include "addbasis/randmodel.hpp"
#include "addbasis/report.hpp"
#include "addbasis/repr.hpp"
#include "addbasis/rng.hpp"
#include "addbasis/sequences.hpp"
#include "addbasis/version.hpp"
