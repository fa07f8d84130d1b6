#pragma once

#include <ramcat/arrows.hpp>
#include <ramcat/cache.hpp>
#include <ramcat/category_io.hpp>
#include <ramcat/degrees.hpp>
#include <ramcat/digest.hpp>
#include <ramcat/essential.hpp>
#include <ramcat/expansion_functor.hpp>
#include <ramcat/expansions.hpp>
#include <ramcat/fincat.hpp>
#include <ramcat/generators.hpp>
#include <ramcat/json_io.hpp>
#include <ramcat/matrix.hpp>
#include <ramcat/worker_pool.hpp>
