#pragma once

#include "wgym/backend/page.hpp"
#include "wgym/tasks/registry.hpp"

namespace wgym {

// "example.einstein": answer a question in the chat.
// "example.image-goal": goal with a text and an image part.
// "example.vote": the upvote/downvote form page; click Upvote.
void register_example_tasks(TaskRegistry& registry);

// The vote form with fixed bids 167 (form), 169 (Upvote), 174 (score),
// 179 (Downvote).
void build_vote_page(PageModel& page);
inline constexpr const char* kVotePageUrl = "http://stackoverflow.local/questions/18838";

}  // namespace wgym
