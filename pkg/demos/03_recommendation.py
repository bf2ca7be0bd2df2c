"""End-to-end adviser search on a full-scale synthetic community.

Generates the default 43-member / 19-category scenario with planted
experts, asks for advisers in one category, then submits fresh ratings
through the engine and shows the recommendation shifting as trust and
knowledge change.
"""

from socialspace import Engine, EngineConfig, UserContext
from socialspace.scenario import ScenarioSpec, category_ids, generate_scenario

planted = {cid: (7 * k + 3) % 43 for k, cid in enumerate(category_ids(19))}
com = generate_scenario(ScenarioSpec(seed=42, planted_experts=planted))
engine = Engine(EngineConfig(), com)

category = "c04"
print(f"category {category} ({com.categories[category]}), "
      f"planted expert: member {planted[category]}\n")


def show(tag, rec):
    print(f"{tag}: top advisers")
    for entry in rec.ranked[:5]:
        star = "*" if entry in rec.top3 else " "
        print(f"  {star} member {entry.member_id:2d}  score {entry.score:+.4f}  "
              f"({len(entry.sources)} response(s))")
    print()


ctx = UserContext(user=0, category=category)
show("before any new ratings", engine.recommend(ctx, query_id="demo-before"))

# a wave of members suddenly vouches for member 20 in this category.
# only raters with spare capacity under the 3-subject cap may rate, and
# we skip the origin's direct neighbors: a member holding ratings answers
# queries instead of forwarding them, so raters next to the origin would
# absorb the flood immediately.
blocked = {0, 20} | set(com.neighbors(0))

def can_rate(r):
    held = com.ratings.get((r, category), {})
    return r not in blocked and 20 not in held and len(held) < 3

raters = [r for r in com.members if can_rate(r)][:7]
batch = [(r, 20, category, +1) for r in raters]
tick, updates = engine.submit_ratings(batch)
print(f"submitted {len(batch)} new ratings -> tick {tick}, "
      f"{updates} edge trust update(s)\n")

show("after the new ratings", engine.recommend(ctx, query_id="demo-after"))

before = engine.trace("demo-before")
after = engine.trace("demo-after")
print(f"gather trace before: {before.agents_visited} agents visited, "
      f"{before.messages_sent} query messages")
print(f"gather trace after:  {after.agents_visited} agents visited, "
      f"{after.messages_sent} query messages")
print("(new knowledge shrinks the flood: raters answer instead of forwarding)")
longest = max(after.paths, key=len)
print(f"longest winning path: {' -> '.join(map(str, longest))}")
