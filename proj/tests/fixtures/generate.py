#!/usr/bin/env python3
"""Regenerates the fixture web sites, golden texts and mock scenarios.

Output is deterministic. Golden texts and word counts are computed here from
the block lists that make up each page, not by running the extractor.
"""
import json
import random
import shutil
from html import escape
from pathlib import Path

ROOT = Path(__file__).resolve().parent
SITES = ROOT / "sites"
GOLDEN = ROOT / "golden"
SCENARIOS = ROOT / "scenarios"
CALIBRATION = ROOT / "calibration"

SENTENCES = [
    "We collect the name and email address you provide when you create an account.",
    "Payment data is processed by our payment provider and is not stored on our servers.",
    "We use cookies to remember your preferences and to measure how the site is used.",
    "You may request access to the personal data we hold about you at any time.",
    "Personal data is retained for as long as your account remains active.",
    "We share usage statistics with analytics partners in aggregated form only.",
    "Our servers are located in data centres within the European Union.",
    "You can withdraw your consent to marketing emails through the link in every message.",
    "We apply encryption in transit and restrict access to authorised staff.",
    "Data may be transferred to service providers who act on our instructions.",
    "Requests to delete your data are handled within thirty days.",
    "We do not sell personal information to third parties.",
    "Log files record the IP address, browser type and time of access.",
    "The controller responsible for processing is named in the contact section below.",
    "Children under sixteen may not register without parental consent.",
    "We review this policy regularly and announce material changes by email.",
]

HEADINGS = [
    "Scope of this policy", "Data we collect", "How we use your data", "Cookies and tracking",
    "Sharing with third parties", "International transfers", "Retention", "Your rights",
    "Security measures", "Contact",
]


def words(text):
    return len(text.split())


def policy_blocks(rng, target_words, title="Privacy Policy"):
    """Heading and paragraph blocks totalling exactly target_words words."""
    blocks = [("h1", title)]
    total = words(title)
    heading_iter = iter(HEADINGS * 10)
    while total < target_words:
        heading = next(heading_iter)
        if total + words(heading) + 4 > target_words:
            break
        blocks.append(("h2", heading))
        total += words(heading)
        para = []
        for _ in range(rng.randint(2, 4)):
            para.append(rng.choice(SENTENCES))
        text = " ".join(para)
        room = target_words - total
        tokens = text.split()
        if len(tokens) > room:
            tokens = tokens[:room]
        blocks.append(("p", " ".join(tokens)))
        total += len(tokens)
    while total < target_words:
        filler = "Further details are available on request."
        tokens = filler.split()[: target_words - total]
        blocks.append(("p", " ".join(tokens)))
        total += len(tokens)
    assert total == target_words, (total, target_words)
    return blocks


def render_blocks(blocks):
    out = []
    for tag, text in blocks:
        out.append(f"    <{tag}>\n      {escape(text, quote=False)}\n    </{tag}>")
    return "\n".join(out)


def chrome_page(title, main_html, footer_links="", nav_links=""):
    return f"""<!DOCTYPE html>
<html lang="en">
<head>
  <meta charset="utf-8">
  <title>{escape(title)} SENTINELTITLE</title>
  <style>body {{ font-family: sans-serif; }} .SENTINELSTYLE {{}}</style>
  <script>window.SENTINELSCRIPT = "tracking";</script>
</head>
<body>
  <header class="site-header">
    <div class="logo">SENTINELHEADER Company</div>
    <nav>
      <a href="/">Home</a>
      <a href="/shop">Shop</a>
      {nav_links}
      <span>SENTINELNAV</span>
    </nav>
  </header>
  <main>
{main_html}
  </main>
  <aside>SENTINELASIDE related links</aside>
  <form action="/newsletter"><label>SENTINELFORM Newsletter</label><input name="email"></form>
  <footer>
    <p>SENTINELFOOTER &copy; Example Company</p>
    {footer_links}
  </footer>
  <script>console.log("SENTINELSCRIPT2");</script>
</body>
</html>
"""


def landing(title, footer_links="", nav_links="", body="<p>Welcome to our shop.</p>"):
    return chrome_page(title, "    " + body, footer_links=footer_links, nav_links=nav_links)


class Corpus:
    def __init__(self):
        self.files = {}
        self.sites = []
        self.behaviors = []

    def put(self, host, path, content):
        self.files[(host, path)] = content

    def policy(self, host, path, blocks, title="Privacy Policy", golden_name=None):
        self.put(host, path, chrome_page(title, render_blocks(blocks)))
        text = "\n".join(t for _, t in blocks)
        if golden_name:
            GOLDEN.mkdir(parents=True, exist_ok=True)
            (GOLDEN / golden_name).write_text(text + "\n", encoding="utf-8")
        return text

    def write(self):
        for (host, path), content in sorted(self.files.items()):
            rel = file_for(path)
            dest = SITES / host / rel
            dest.parent.mkdir(parents=True, exist_ok=True)
            dest.write_text(content, encoding="utf-8")
        manifest = {"sites": self.sites, "behaviors": self.behaviors}
        (SITES / "manifest.json").write_text(json.dumps(manifest, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")


def file_for(path):
    """Path on disk for a URL path; the fixture server uses the same rule."""
    path = path.split("?", 1)[0]
    if path == "/":
        return "index.html"
    path = path.lstrip("/")
    return path if path.endswith(".html") else path + ".html"


def footer(*links):
    return "\n    ".join(f'<a href="{escape(h)}">{escape(t)}</a>' for h, t in links)


def build_corpus():
    rng = random.Random(20240501)
    c = Corpus()

    def ok_site(n, note, landing_html, policy_host, policy_path, target, golden=None, page="/", title="Privacy Policy"):
        host = f"site{n:02d}.test"
        c.put(host, page, landing_html)
        blocks = policy_blocks(rng, target, title=title)
        c.policy(policy_host or host, policy_path, blocks, title=title, golden_name=golden)
        c.sites.append({
            "host": host,
            "page_url": f"http://{host}{page}",
            "expected": "ok",
            "policy_url": f"http://{policy_host or host}{policy_path}",
            "word_count": sum(words(t) for _, t in blocks),
            "golden": golden,
            "note": note,
        })
        return host

    ok_site(1, "single footer link, 1200-word policy",
            landing("Site 1", footer(("/privacy-policy", "Privacy Policy"), ("/imprint", "Imprint"))),
            None, "/privacy-policy", 1200, golden="site01.txt")
    ok_site(2, "German keyword beats imprint",
            landing("Site 2", footer(("/impressum", "Impressum"), ("/datenschutz", "Datenschutzerklärung"))),
            None, "/datenschutz", 420, title="Datenschutzerklärung")
    ok_site(3, "privacy outranks datenschutz and imprint",
            landing("Site 3", footer(("/imprint", "Imprint"), ("/ds", "Datenschutz"), ("/privacy", "Privacy"))),
            None, "/privacy", 350, golden="site03.txt")
    ok_site(4, "keyword only in href path",
            landing("Site 4", footer(("/legal/privacy-notice", "Legal notice"), ("/terms", "Terms"))),
            None, "/legal/privacy-notice", 300)
    ok_site(5, "cross-origin policy host",
            landing("Site 5", footer(("http://legal.site05-partner.test/policies/privacy", "Privacy Policy"))),
            "legal.site05-partner.test", "/policies/privacy", 500)
    c.behaviors.append({"host": "site06.test", "path": "/privacy", "redirect": "/legal/privacy-2024"})
    ok_site(6, "policy link redirects",
            landing("Site 6", footer(("/privacy", "Privacy Policy"))),
            None, "/legal/privacy-2024", 260)
    c.sites[-1]["policy_url"] = "http://site06.test/legal/privacy-2024"
    ok_site(7, "two policy links, footer one wins, other recorded",
            landing("Site 7", footer(("/privacy-policy", "Privacy Policy")),
                    nav_links='<a href="/privacy-us">US Privacy Policy</a>'),
            None, "/privacy-policy", 640)
    c.put("site07.test", "/privacy-us", chrome_page("US", render_blocks(policy_blocks(rng, 200))))
    c.sites[-1]["alternates"] = ["http://site07.test/privacy-us"]
    ok_site(8, "upper-case anchor text and relative href",
            landing("Site 8", footer(("help/PRIVACY", "PRIVACY")), body='<p>Catalogue</p>'),
            None, "/help/PRIVACY", 150)
    ok_site(9, "data protection keyword",
            landing("Site 9", footer(("/dp", "Data Protection"), ("/contact", "Contact"))),
            None, "/dp", 100)
    ok_site(10, "deep landing page with query string",
            landing("Site 10", footer(("/privacy?lang=en", "Privacy policy"))),
            None, "/privacy?lang=en", 800, page="/products/item?id=7")
    c.sites[-1]["policy_url"] = "http://site10.test/privacy?lang=en"
    ok_site(11, "anchor nested in markup",
            landing("Site 11", '<ul class="footer-links"><li><a href="/p"><span>Our <b>Privacy</b> Policy</span></a></li></ul>'),
            None, "/p", 330)
    ok_site(12, "absolute same-host link",
            landing("Site 12", footer(("http://site12.test/privacy.html", "Privacy"))),
            None, "/privacy.html", 275)
    ok_site(13, "link outside footer only",
            landing("Site 13", "", body='<p>Read our <a href="/about/privacy">privacy policy</a>.</p>'),
            None, "/about/privacy", 210)
    ok_site(14, "ampersand in anchor text",
            landing("Site 14", footer(("/privacy", "Privacy & cookies"))),
            None, "/privacy", 190)

    # Link not found.
    c.put("site15.test", "/", "<html><body><p>Under construction.</p></body></html>")
    c.sites.append({"host": "site15.test", "page_url": "http://site15.test/", "expected": "link_not_found",
                    "note": "no anchors at all"})
    c.put("site16.test", "/", landing("Site 16", footer(("/imprint", "Imprint"), ("/contact", "Contact"), ("/terms", "Terms of Service"))))
    c.sites.append({"host": "site16.test", "page_url": "http://site16.test/", "expected": "link_not_found",
                    "note": "only unrelated anchors"})
    c.put("site17.test", "/", landing("Site 17", footer(("mailto:privacy@site17.test", "Privacy questions"), ("javascript:void(0)", "Privacy settings"))))
    c.sites.append({"host": "site17.test", "page_url": "http://site17.test/", "expected": "link_not_found",
                    "note": "only non-http privacy anchors"})

    # Fetch blocked.
    c.put("site18.test", "/", landing("Site 18", footer(("/privacy", "Privacy Policy"))))
    c.behaviors.append({"host": "site18.test", "path": "/privacy", "status": 403})
    c.sites.append({"host": "site18.test", "page_url": "http://site18.test/", "expected": "fetch_blocked",
                    "note": "policy page answers 403"})
    c.put("site19.test", "/", landing("Site 19", footer(("/privacy", "Privacy Policy"))))
    c.put("site19.test", "/privacy", chrome_page("slow", render_blocks(policy_blocks(rng, 300))))
    c.behaviors.append({"host": "site19.test", "path": "/privacy", "delay_ms": 2500})
    c.sites.append({"host": "site19.test", "page_url": "http://site19.test/", "expected": "fetch_blocked",
                    "note": "policy page slower than the fetch timeout"})

    # Too short.
    c.put("site20.test", "/", landing("Site 20", footer(("/privacy", "Privacy Policy"))))
    short = policy_blocks(rng, 40)
    c.policy("site20.test", "/privacy", short)
    c.sites.append({"host": "site20.test", "page_url": "http://site20.test/", "expected": "too_short",
                    "word_count": sum(words(t) for _, t in short), "note": "40-word policy"})

    # Bookstores for the comparison scenario.
    for name, company, target in BOOKSTORES:
        host = f"www.{name}.test"
        c.put(host, "/", landing(company, footer(("/privacy", "Privacy Policy"))))
        blocks = policy_blocks(rng, target, title=f"{company} Privacy Policy")
        c.policy(host, "/privacy", blocks, title=f"{company} Privacy Policy")
        c.sites.append({"host": host, "page_url": f"http://{host}/", "expected": "ok", "group": "bookstore",
                        "policy_url": f"http://{host}/privacy", "word_count": sum(words(t) for _, t in blocks),
                        "company": company})
    return c


BOOKSTORES = [
    ("pageturner-books", "Pageturner Books", 520),
    ("inkwell-readers", "Inkwell Readers", 610),
    ("chapterhouse-shop", "Chapterhouse Shop", 480),
    ("novel-nook", "Novel Nook", 700),
]

# Scores per bookstore; criteria names vary between stores on purpose.
BOOKSTORE_SCORES = {
    "Pageturner Books": [("Data Minimization", 4), ("Transparency", 4), ("Purpose Limitation", 3),
                         ("Security", 5), ("User Rights", 4), ("Consent", 4), ("Data Transfer", 3), ("Retention", 4)],
    "Inkwell Readers": [("Data Minimization", 2), ("Transparency", 3), ("Purpose Limitation", 2),
                        ("Security", 3), ("User Rights", 3), ("Consent", 2), ("Data Transfer", 1), ("Retention", 2)],
    "Chapterhouse Shop": [("Data minimization", 3), ("Transparency", 3), ("Purpose limitation", 4),
                          ("Data Security", 3), ("User rights", 2), ("Consent", 3)],
    "Novel Nook": [("Transparency", 5), ("Security", 4), ("User Rights", 5), ("Consent", 3),
                   ("Third-party sharing", 4), ("Retention", 4), ("Children's privacy", 3)],
}

JUSTIFICATION = {
    5: "The policy handles this thoroughly and in clear language.",
    4: "The policy covers this well with minor gaps.",
    3: "The policy mentions this but stays vague in places.",
    2: "The policy addresses this only superficially.",
    1: "The policy does not address this or contradicts good practice.",
}


def assessment_text(scores):
    lines = ["1. Criteria", "The following criteria are relevant for this policy.", "", "2. Analysis",
             "The policy was read in full.", "", "3. Evaluation"]
    for name, score in scores:
        lines.append(f"{name}: {score}/5")
        lines.append(JUSTIFICATION[score])
        lines.append("")
    lines += ["4. Conclusion", "Overall the policy has been evaluated above."]
    return "\n".join(lines)


def build_scenarios():
    book = SCENARIOS / "bookstores"
    book.mkdir(parents=True, exist_ok=True)
    entries = []
    for _, company, _ in BOOKSTORES:
        # The policy text opens with its title, so this needle only matches the assessment prompt.
        entries.append({"contains": f"Privacy policy:\n{company} Privacy Policy", "tier": "assessment",
                        "response": assessment_text(BOOKSTORE_SCORES[company])})
    (book / "01_assessments.json").write_text(json.dumps({"responses": entries}, indent=2) + "\n", encoding="utf-8")
    chat = [{"contains": "Your output consists of three questions", "tier": "lightweight",
             "response": "1. How long is my data stored?\n2. Who receives my data?\n3. Can I delete my account?"},
            {"contains": "| Rating:", "tier": "assessment",
             "response": "The policy states that data is kept for as long as the account is active."}]
    (book / "02_chat.json").write_text(json.dumps({"responses": chat}, indent=2) + "\n", encoding="utf-8")


CALIBRATION_NAMES = [
    "Data Minimization", "Transparency", "Purpose Limitation", "Security", "User Rights", "Consent",
    "Data Transfer", "Retention", "Children's Privacy", "Accountability", "Cookies", "Contact Options",
]


def build_calibration():
    """Ten strong and ten weak policies with scripted assessments (>=4 or <=2)."""
    rng = random.Random(7)
    CALIBRATION.mkdir(parents=True, exist_ok=True)
    scenario_dir = SCENARIOS / "calibration"
    scenario_dir.mkdir(parents=True, exist_ok=True)
    labels = []
    entries = []
    for kind in ("strong", "weak"):
        for i in range(1, 11):
            name = f"{kind}{i:02d}"
            marker = f"Calibration fixture {name} policy"
            blocks = policy_blocks(rng, rng.randint(150, 400), title=marker)
            (CALIBRATION / f"{name}.txt").write_text("\n".join(t for _, t in blocks) + "\n", encoding="utf-8")
            count = rng.randint(3, 12)
            crit = rng.sample(CALIBRATION_NAMES, count)
            pool = (4, 5) if kind == "strong" else (1, 2)
            scores = [(c, rng.choice(pool)) for c in crit]
            entries.append({"contains": marker, "tier": "assessment", "response": assessment_text(scores)})
            labels.append({"name": name, "label": kind, "marker": marker})
    (scenario_dir / "assessments.json").write_text(json.dumps({"responses": entries}, indent=2) + "\n", encoding="utf-8")
    (CALIBRATION / "labels.json").write_text(json.dumps(labels, indent=2) + "\n", encoding="utf-8")


def main():
    for d in (SITES, GOLDEN, SCENARIOS, CALIBRATION):
        if d.exists():
            shutil.rmtree(d)
    build_corpus().write()
    build_scenarios()
    build_calibration()


if __name__ == "__main__":
    main()
