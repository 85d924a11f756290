#!/usr/bin/env python3
"""Generate the bundled synthetic demo: corpus.jsonl, kb.jsonl and testset.txt.

The corpus is invented blog chatter around a few entities that changed (or
gained) names. Output is fully determined by the seed.

    python3 scripts/make_demo.py [--out src/nameshift/data/demo] [--seed 7]
"""
from __future__ import annotations

import argparse
import json
import random
from datetime import datetime, timedelta, timezone
from pathlib import Path

R = "http://dbpedia.org/resource/"
O = "http://dbpedia.org/ontology/"
RDF_TYPE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"
SUBJECT = "http://purl.org/dc/terms/subject"
CAT = R + "Category:"
OWL_THING = "http://www.w3.org/2002/07/owl#Thing"

SOURCES = [f"http://blog{i:02d}.example.org" for i in range(1, 15)]

# (year, weight, templates); each document draws a few sentences from one scenario
SCENARIOS = {
    "combs": [
        (2003, 1, [
            "{Puff Daddy} threw another party in {New York} for {Bad Boy Records}.",
            "Fans of {Puff Daddy} lined up outside the {Bad Boy Records} office.",
            "{Sean Combs} signed a new act to {Bad Boy Records} this spring.",
            "{P. Diddy} is the name {Sean Combs} uses on the new album.",
        ]),
        (2005, 3, [
            "{Sean Combs} hosted the {Video Music Awards} last night, this time in {Miami}.",
            "The rapper {Diddy} told reporters that {Sean Combs} is the same man as ever.",
            "Everybody at the studio still calls {Sean Combs} by the old name, {Puff Daddy}.",
            "{P. Diddy}, also known as {Sean Combs}, appeared on the {MTV} stage.",
            "{Diddy} launched a new fragrance with {Sean John}, his label based in {New York}.",
            "{Sean Penn} met {Sean Combs} backstage at the {Video Music Awards}.",
            "{Diddy - Dirty Money} is a side project {Diddy} keeps teasing.",
            "Critics say {Puff Daddy} was a better stage name than {Diddy}, at least for {Sean Combs}.",
            "{Sean Combs} thanked {MTV}, then {Bad Boy Records}, in a long speech.",
        ]),
    ],
    "pope": [
        (2003, 1, [
            "Cardinal {Joseph Ratzinger} spoke at a conference in {Munich} on faith.",
            "{Joseph Ratzinger} published a new book on the liturgy.",
        ]),
        (2005, 3, [
            "Cardinal {Joseph Ratzinger} was elected {Pope Benedict XVI} at the {Vatican}.",
            "{Pope Benedict} greeted pilgrims from the balcony of the {Vatican}.",
            "The {Vatican} confirmed that {Benedict XVI} will visit {Germany} next summer.",
            "{Joseph Ratzinger} chose the name {Pope Benedict XVI} after a short conclave.",
            "Crowds in {Munich} celebrated {Joseph Ratzinger} becoming {Pope Benedict}.",
            "{Barack Obama} said {Joseph Ratzinger} would be a thoughtful {Pope Benedict}.",
            "{Benedict XVI} met {Barack Obama} briefly after the mass at the {Vatican}.",
        ]),
    ],
    "kinect": [
        (2009, 1, [
            "{Microsoft} showed {Project Natal} on stage for the {Xbox 360}.",
            "{Project Natal} tracks your whole body without a controller.",
        ]),
        (2010, 3, [
            "{Microsoft} renamed {Project Natal} to {Kinect} ahead of the launch.",
            "{Kinect} for the {Xbox 360} sold out at most stores in {Seattle}.",
            "Developers at {Microsoft} say {Kinect} grew out of {Project Natal}.",
            "Reviewers compared {Kinect} with the {Wii Remote} from {Nintendo}.",
            "The {Kinect} sensor ships with {Kinect Adventures} in the box.",
            "{Microsoft} expects {Kinect} to bring new players to {Xbox 360}.",
        ]),
    ],
    "blair": [
        (2006, 2, [
            "{Prime Minister Tony Blair} defended the budget with {Gordon Brown} at his side.",
            "{Prime Minister Blair} answered questions in the {House of Commons}.",
            "{Tony Blair} visited {Washington} to meet {George Bush}.",
            "{Gordon Brown} is expected to follow {Tony Blair} at {Downing Street}.",
        ]),
        (2007, 3, [
            "{Tony Blair} handed {Downing Street} to {Gordon Brown} that summer.",
            "Former {Prime Minister Tony Blair} became an envoy for the {Middle East}.",
            "{Prime Minister Blair} gave a farewell speech in {Sedgefield}.",
            "{Prime Minister Gordon Brown} praised {Tony Blair} in the {House of Commons}.",
            "{Tony Blair} said {Gordon Brown} would be a great {Prime Minister}.",
            "The {Labour Party} thanked {Tony Blair} at the conference in {Manchester}.",
        ]),
    ],
    "marlowe": [
        (2008, 2, [
            "{Zed Marlowe} posted another long rant about bicycle lanes.",
            "{Zed Marlowe}, better known online as {Quiet Kid}, started a podcast.",
            "Readers of {Quiet Kid} know that {Zed Marlowe} loves {Portland}.",
            "{Quiet Kid} interviewed a bike mechanic from {Portland} this week.",
            "Nobody expected {Zed Marlowe} to quit {Twitter} so soon.",
        ]),
    ],
}

FILLER = [
    "the weather was grey again",
    "comments are open as usual",
    "more thoughts on this later",
    "thanks for reading and sharing",
    "we will see what happens next",
    "that is all for today",
]


def _sentence(template: str) -> str:
    return template.replace("{", "").replace("}", "")


def make_corpus(rng: random.Random) -> list[dict]:
    docs = []
    n = 0
    for name, phases in SCENARIOS.items():
        for year, weight, templates in phases:
            for _ in range(40 * weight):
                k = rng.randint(2, 3)
                body = [_sentence(t) for t in rng.sample(templates, min(k, len(templates)))]
                body.insert(rng.randrange(len(body) + 1), rng.choice(FILLER).capitalize() + ".")
                day = datetime(year, 1, 1, tzinfo=timezone.utc) + timedelta(days=rng.randrange(365),
                                                                              seconds=rng.randrange(86400))
                n += 1
                docs.append({
                    "id": f"{name}-{year}-{n:05d}",
                    "source_id": rng.choice(SOURCES),
                    "published_at": day.strftime("%Y-%m-%dT%H:%M:%SZ"),
                    "content": " ".join(body),
                })
    docs.sort(key=lambda d: (d["published_at"], d["id"]))
    return docs


def _res(name: str) -> str:
    return R + name.replace(" ", "_")


def _entity(name, types=(), subjects=(), literals=(), redirect=None, disambiguates=()):
    props = [[RDF_TYPE, O + t, "resource"] for t in types]
    props += [[SUBJECT, CAT + s, "resource"] for s in subjects]
    props += [[O + p, v, "literal"] for p, v in literals]
    return {"uri": _res(name), "properties": props, "redirect": _res(redirect) if redirect else None,
            "disambiguates": [_res(d) for d in disambiguates]}


TYPE_TREE = {
    "Agent": None, "Person": "Agent", "Artist": "Person", "MusicalArtist": "Artist", "Actor": "Artist",
    "Cleric": "Person", "Pope": "Cleric", "OfficeHolder": "Person", "Politician": "Person",
    "Organisation": "Agent", "Band": "Organisation", "Company": "Organisation", "RecordLabel": "Company",
    "PoliticalParty": "Organisation", "Broadcaster": "Organisation",
    "Place": None, "PopulatedPlace": "Place", "Country": "PopulatedPlace", "City": "PopulatedPlace",
    "Building": "Place", "Device": None, "VideoGame": None, "FictionalCharacter": None, "Event": None, "TelevisionShow": None,
}


def make_kb() -> list[dict]:
    recs = [
        _entity("Sean Combs", ["Person", "MusicalArtist"], ["American hip hop musicians", "Bad Boy Records"],
                [("birthDate", "1969-11-04"), ("activeYearsStartYear", "1990")]),
        _entity("Puff Daddy", redirect="Sean Combs"),
        _entity("P. Diddy", redirect="Sean Combs"),
        # no resource for the name itself points at the person: it lands on a disambiguation page
        _entity("Diddy", redirect="Diddy (disambiguation)"),
        _entity("Diddy (disambiguation)", disambiguates=["Diddy - Dirty Money", "Diddy Kong"]),
        _entity("Diddy - Dirty Money", ["Band", "Organisation"], ["American hip hop groups", "Bad Boy Records"],
                [("activeYearsStartYear", "2009"),
                 ("abstract", "Diddy - Dirty Money was a group formed by Sean Combs with two singers. "
                              "Sean Combs released the album on Bad Boy Records, the label of Sean Combs.")]),
        _entity("Diddy Kong", ["FictionalCharacter"], ["Donkey Kong characters", "Nintendo characters"],
                [("firstAppearance", "1995"), ("abstract", "Diddy Kong is a monkey from the Nintendo games.")]),
        _entity("Sean Penn", ["Person", "Actor"], ["American film actors"], [("birthDate", "1960-08-17")]),
        _entity("Sean John", ["Company", "Organisation"], ["Clothing brands"], [("foundingYear", "1998")]),
        _entity("Bad Boy Records", ["RecordLabel", "Company", "Organisation"], ["Bad Boy Records"],
                [("foundingYear", "1993")]),
        _entity("MTV", ["Broadcaster", "Organisation"], ["Music television channels"], [("foundingYear", "1981")]),
        _entity("Video Music Awards", ["Event"], ["MTV Video Music Awards"], [("firstAwarded", "1984")]),
        _entity("New York", ["City", "PopulatedPlace", "Place"], ["Cities in New York"], [("foundingYear", "1624")]),
        _entity("Miami", ["City", "PopulatedPlace", "Place"], ["Cities in Florida"], [("foundingYear", "1896")]),

        _entity("Pope Benedict XVI", ["Person", "Cleric", "Pope"], ["Popes", "German cardinals"],
                [("birthDate", "1927-04-16"), ("papacyStart", "2005-04-19")]),
        _entity("Joseph Ratzinger", redirect="Pope Benedict XVI"),
        _entity("Benedict XVI", redirect="Pope Benedict XVI"),
        _entity("Pope Benedict"),
        _entity("Pope Benedict (disambiguation)",
                disambiguates=["Pope Benedict", "Pope Benedict XVI", "Pope Benedict III"]),
        _entity("Pope Benedict III", ["Person", "Cleric", "Pope"], ["Popes", "9th-century popes"],
                [("papacyStart", "0855"), ("abstract", "Benedict III was pope for three years in Rome.")]),
        _entity("Vatican City", ["Country", "PopulatedPlace", "Place"], ["Enclaved countries"],
                [("establishedYear", "1929")]),
        _entity("Vatican", redirect="Vatican City"),
        _entity("Barack Obama", ["Person", "OfficeHolder"], ["Presidents of the United States"],
                [("birthDate", "1961-08-04"), ("termStart", "2009-01-20")]),
        _entity("Munich", ["City", "PopulatedPlace", "Place"], ["Cities in Bavaria"], [("foundingYear", "1158")]),
        _entity("Germany", ["Country", "PopulatedPlace", "Place"], ["Countries in Europe"], [("foundingYear", "1871")]),

        _entity("Kinect", ["Device"], ["Xbox 360 accessories", "Motion controllers"], [("releaseDate", "2010-11-04")]),
        _entity("Project Natal", redirect="Kinect"),
        _entity("Microsoft", ["Company", "Organisation"], ["Software companies"], [("foundingYear", "1975")]),
        _entity("Xbox 360", ["Device"], ["Xbox 360", "Home video game consoles"], [("releaseDate", "2005-11-22")]),
        _entity("Wii Remote", ["Device"], ["Motion controllers"], [("releaseDate", "2006-11-19")]),
        _entity("Nintendo", ["Company", "Organisation"], ["Video game companies"], [("foundingYear", "1889")]),
        _entity("Kinect Adventures", ["VideoGame"], ["Kinect games"], [("releaseDate", "2010-11-04")]),
        _entity("Seattle", ["City", "PopulatedPlace", "Place"], ["Cities in Washington"], [("foundingYear", "1851")]),

        _entity("Tony Blair", ["Person", "OfficeHolder"], ["Prime Ministers of the United Kingdom"],
                [("birthDate", "1953-05-06"), ("termStart", "1997-05-02"), ("termEnd", "2007-06-27")]),
        _entity("Prime Minister Tony Blair", redirect="Tony Blair"),
        _entity("Gordon Brown", ["Person", "OfficeHolder"], ["Prime Ministers of the United Kingdom"],
                [("birthDate", "1951-02-20"), ("termStart", "2007-06-27"), ("termEnd", "2010-05-11")]),
        _entity("Prime Minister Gordon Brown", redirect="Gordon Brown"),
        _entity("George Bush", ["Person", "OfficeHolder"], ["Presidents of the United States"],
                [("birthDate", "1946-07-06"), ("termStart", "2001-01-20")]),
        _entity("Downing Street", ["Building", "Place"], ["Streets in Westminster"], [("built", "1684")]),
        _entity("House of Commons", ["Organisation"], ["Parliament of the United Kingdom"], [("established", "1707")]),
        _entity("Labour Party", ["PoliticalParty", "Organisation"], ["Political parties in the UK"],
                [("foundingYear", "1900")]),
        _entity("Prime Minister", ["Person"], ["Government occupations"]),
        _entity("Washington", ["City", "PopulatedPlace", "Place"], ["Capitals"], [("foundingYear", "1790")]),
        _entity("Middle East", ["Place"], ["Regions"]),
        _entity("Sedgefield", ["City", "PopulatedPlace", "Place"], ["Towns in County Durham"]),
        _entity("Manchester", ["City", "PopulatedPlace", "Place"], ["Cities in England"], [("foundingYear", "1301")]),

        _entity("Portland", ["City", "PopulatedPlace", "Place"], ["Cities in Oregon"], [("foundingYear", "1845")]),
        _entity("Twitter", ["Company", "Organisation"], ["Social networks"], [("foundingYear", "2006")]),
    ]
    for t, sup in sorted(TYPE_TREE.items()):
        recs.append({"type": O + t, "super": O + sup if sup else OWL_THING})
    return recs


TESTSET = """\
# query | expected groups (names in a group are interchangeable) | change periods
Sean Combs | Diddy, P. Diddy; Puff Daddy | 2005
Joseph Ratzinger | Pope Benedict XVI, Benedict XVI, Pope Benedict | 2005
Kinect | Project Natal | 2010
Tony Blair | Prime Minister Blair, Prime Minister Tony Blair | 2007
Zed Marlowe | Quiet Kid | 2008
"""

CONFIG = """\
# demo configuration; relative paths are resolved against this file
corpus = corpus.jsonl
testset = testset.txt
kb_snapshot = kb.jsonl
target_terms = 30
k = 0.25
l = 0.25
"""


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parents[1] / "src/nameshift/data/demo")
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args(argv)
    args.out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(args.seed)
    with open(args.out / "corpus.jsonl", "w", encoding="utf-8") as fh:
        for d in make_corpus(rng):
            fh.write(json.dumps(d, ensure_ascii=False) + "\n")
    with open(args.out / "kb.jsonl", "w", encoding="utf-8") as fh:
        for rec in make_kb():
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
    (args.out / "testset.txt").write_text(TESTSET, encoding="utf-8")
    (args.out / "demo.conf").write_text(CONFIG, encoding="utf-8")
    print(f"wrote demo data to {args.out}")


if __name__ == "__main__":
    main()
