"""Watch a query flood through a small acquaintance graph.

Builds a 10-member community by mutual certification, plants a few
ratings, runs one gather, and prints which agents responded, which
forwarded, and the exact path each response took back to the origin.
"""

from socialspace import (
    Community,
    MemberProfile,
    TrustParams,
    annotate_trust,
    gather,
)

members = {m: MemberProfile(member_id=m, name=f"member-{m}") for m in range(10)}
com = Community(members=members, categories={"databases": "Databases"})

# certify both directions of each acquaintance
pairs = [(0, 1), (0, 2), (1, 3), (2, 4), (3, 5), (4, 5), (5, 6), (4, 7), (7, 8), (8, 9)]
for i, j in pairs:
    com = com.certify_edge(i, j).certify_edge(j, i)

# members 5 and 8 know rated experts for databases; nobody else does
com, _ = com.with_rating_batch(
    [(5, 9, "databases", +1), (5, 3, "databases", -1), (8, 9, "databases", +1)],
    TrustParams(),
)

result = gather(com, 0, "databases")
print(f"query from member 0 in 'databases'")
print(f"agents visited: {result.agents_visited}, query messages: {result.messages_sent}\n")

responders = {r.responder for r in result.responses}
for path in result.paths:
    agent = path[-1]
    role = "RESPONDS" if agent in responders else "forwards"
    print(f"  arrival {' -> '.join(map(str, path))}   agent {agent} {role}")

print("\nresponses, weighted by path trust (fresh network: all edges T = 0.5):")
for w in annotate_trust(result, com, TrustParams()):
    print(f"  responder {w.responder} rates member {w.subject} "
          f"{'+' if w.rate > 0 else '-'}  path trust {w.path_trust:.3f}  "
          f"weight {w.weight:.3f}")

print("\nNote the absorption rule: members behind a responder are never"
      "\nvisited, because responders answer instead of forwarding.")
