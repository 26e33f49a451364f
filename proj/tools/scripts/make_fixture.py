#!/usr/bin/env python3
"""Generate the synthetic 60-player league bundled under data/datasets/league60.

Deterministic (fixed numpy seed); rerunning reproduces the committed CSVs.
Units follow the player schema: height cm, weight kg, game_time in hundreds
of minutes, passing accuracy in percent, penalty accuracy as a fraction.
"""
import argparse
import csv
from pathlib import Path

import numpy as np

CLUBS = [
    # club_id, league, country, continent, top, league median fee (M EUR), budget, profit_min
    ("RIV", "EPL", "ENG", "EU", True, 9.5, 60.0, 0.0),
    ("NOR", "EPL", "ENG", "EU", True, 9.5, 40.0, 0.0),
    ("VAL", "LAL", "ESP", "EU", True, 7.0, 50.0, 0.0),
    ("KRO", "BUN", "GER", "EU", True, 6.0, 45.0, 0.0),
    ("PAM", "ARP", "ARG", "SA", False, 2.5, 10.0, 0.0),
]

# Focal club carries a full 24-man squad; the others nine players each.
SQUADS = {
    "RIV": ["GK"] * 3 + ["DF"] * 8 + ["MF"] * 8 + ["FW"] * 5,
    "NOR": ["GK", "DF", "DF", "DF", "MF", "MF", "MF", "FW", "FW"],
    "VAL": ["GK", "DF", "DF", "DF", "MF", "MF", "MF", "FW", "FW"],
    "KRO": ["GK", "DF", "DF", "DF", "MF", "MF", "MF", "FW", "FW"],
    "PAM": ["GK", "DF", "DF", "DF", "MF", "MF", "MF", "FW", "FW"],
}

NATIONALITY = {"ENG": ["ENG", "ENG", "FRA", "ESP"], "ESP": ["ESP", "ESP", "ARG", "FRA"],
               "GER": ["GER", "GER", "FRA", "BRA"], "ARG": ["ARG", "ARG", "BRA", "URU"]}

HEADER = ["player_id", "name", "position", "age", "height", "weight", "nationality", "club_id",
          "prev_club_id", "league_id", "prev_league_id", "last_rating", "career_rating", "game_time",
          "goals", "goal_contributions", "penalty_accuracy", "shots", "passing_accuracy",
          "yellow_cards", "red_cards", "clearances", "interceptions", "n_transfers", "transfer_listed"]

# Position-specific attacking / defending intensity per season.
PROFILE = {
    "GK": dict(goals=0.0, assists=0.0, shots=0.0, clear=8.0, inter=2.0, height=189, weight=84),
    "DF": dict(goals=1.5, assists=1.5, shots=8.0, clear=45.0, inter=35.0, height=184, weight=79),
    "MF": dict(goals=3.5, assists=4.0, shots=25.0, clear=12.0, inter=28.0, height=178, weight=73),
    "FW": dict(goals=9.0, assists=4.0, shots=55.0, clear=4.0, inter=8.0, height=181, weight=76),
}


def r2(x):
    return float(round(x, 2))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[2] / "data/datasets/league60"))
    ap.add_argument("--seed", type=int, default=2019)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    club_rows = {c[0]: c for c in CLUBS}
    strength = {"RIV": 6.85, "NOR": 6.80, "VAL": 6.90, "KRO": 6.75, "PAM": 6.55}
    others = [c[0] for c in CLUBS]
    rows = []
    n = 0
    for club, positions in SQUADS.items():
        _, league, country, *_ = club_rows[club]
        for pos in positions:
            n += 1
            prof = PROFILE[pos]
            age = int(rng.integers(19, 34))
            if club == "RIV":
                age = int(rng.integers(21, 33))
            gt = float(np.clip(rng.normal(22, 7), 4, 34))
            scale = gt / 30.0
            goals = int(rng.poisson(prof["goals"] * scale))
            assists = int(rng.poisson(prof["assists"] * scale))
            yellow = int(rng.poisson(3 * scale + 0.5))
            red = int(rng.random() < 0.08)
            rating = float(np.clip(rng.normal(strength[club], 0.3), 6.0, 7.9))
            moved = rng.random() < 0.25
            prev = club if not moved else str(rng.choice([o for o in others if o != club]))
            prev_league = club_rows[prev][1]
            rows.append({
                "player_id": f"P{n:03d}",
                "name": f"Player {n:03d}",
                "position": pos,
                "age": age,
                "height": int(round(rng.normal(prof["height"], 5))),
                "weight": int(round(rng.normal(prof["weight"], 4))),
                "nationality": str(rng.choice(NATIONALITY[country])),
                "club_id": club,
                "prev_club_id": prev,
                "league_id": league,
                "prev_league_id": prev_league,
                "last_rating": r2(rating),
                "career_rating": r2(np.clip(rating + rng.normal(0, 0.15), 6.0, 7.9)),
                "game_time": r2(gt),
                "goals": goals,
                "goal_contributions": goals + assists,
                "penalty_accuracy": r2(rng.uniform(0.6, 0.95)) if pos in ("MF", "FW") else 0.0,
                "shots": int(rng.poisson(prof["shots"] * scale)),
                "passing_accuracy": r2(np.clip(rng.normal(80, 5), 60, 93)),
                "yellow_cards": yellow,
                "red_cards": red,
                "clearances": int(rng.poisson(prof["clear"] * scale)),
                "interceptions": int(rng.poisson(prof["inter"] * scale)),
                "n_transfers": int(rng.integers(0, 5)) + int(moved),
                "transfer_listed": "true" if rng.random() < 0.1 else "false",
            })

    with open(out / "players.csv", "w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=HEADER, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    with open(out / "clubs.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["club_id", "league_id", "country", "continent", "top_league",
                    "league_median_sell_fee", "league_median_buy_fee", "budget_max", "profit_min"])
        for cid, league, country, cont, top, fee, budget, profit in CLUBS:
            w.writerow([cid, league, country, cont, "true" if top else "false", fee, fee, budget, profit])
    print(f"wrote {len(rows)} players to {out}")


if __name__ == "__main__":
    main()
