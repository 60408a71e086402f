#pragma once

#include "colloquy/dedup.hpp"
#include "colloquy/domain.hpp"
#include "colloquy/engine.hpp"
#include "colloquy/errors.hpp"
#include "colloquy/expander.hpp"
#include "colloquy/gateway.hpp"
#include "colloquy/http_provider.hpp"
#include "colloquy/mock_provider.hpp"
#include "colloquy/paper_bank.hpp"
#include "colloquy/prompt_texts.hpp"
#include "colloquy/prompts.hpp"
#include "colloquy/report.hpp"
#include "colloquy/runner.hpp"
#include "colloquy/s2_client.hpp"
#include "colloquy/tournament.hpp"
#include "colloquy/util.hpp"
