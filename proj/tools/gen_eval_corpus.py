#!/usr/bin/env python3
"""Generate the committed evaluation corpus (data/corpus_eval.json).

The corpus is a deterministic synthetic web: 11 topic clusters, 176 queries,
and per-cluster document pools shaped so that retrieval has a stable head and
a jitter-contested tail:

  * "anchor" docs score far above the ranking jitter and are retrieved for
    every cluster query -> they become the recurring community URLs that the
    targeting strategies pick up (the weight-loss cluster deliberately has no
    UGC anchors, so it never yields a target);
  * "authority" docs are stable non-UGC results;
  * "tail" docs sit ~0.02 apart near the rank-10 boundary with ranking jitter
    of +/-0.05, so the bottom result slots differ run to run and seed to seed.

Anchors carry long full-page bodies (fetch_policy full_available); everything
else is snippet-only with a two-sentence, ~22-28 word SERP snippet.

Rerunning this script reproduces the file byte for byte.
"""

import json
import pathlib
import random

SEED = 20250823
OUT = pathlib.Path(__file__).resolve().parent.parent / "data" / "corpus_eval.json"

FILLER = [
    "people", "really", "option", "worth", "trying", "honest", "update",
    "sharing", "experience", "results", "guide", "advice", "question",
    "answer", "looking", "found", "helped", "switched", "finally", "avoid",
    "overall", "recommend", "compare", "review", "details", "process",
]

CLUSTERS = [
    {
        "id": "aaa_alt",
        "category": "emergency_urgent_services",
        "n_queries": 11,
        "seeds": ["alternatives to aaa roadside assistance", "cheap roadside assistance plans"],
        "bases": [
            "alternatives to aaa roadside assistance",
            "cheap roadside assistance plans",
            "roadside assistance without aaa membership",
            "best roadside assistance coverage",
            "is aaa roadside assistance worth it",
            "emergency towing service options",
            "roadside help for older cars",
            "compare roadside assistance providers",
            "roadside assistance through insurance",
            "24 hour roadside assistance near me",
            "roadside assistance for family plans",
        ],
        "mods": [],
        "vocab": [
            "roadside", "towing", "battery", "jumpstart", "flat", "tire",
            "lockout", "coverage", "membership", "insurance", "provider",
            "dispatch", "highway", "breakdown", "mileage", "plan", "driver",
            "vehicle", "service", "miles", "annual", "fee",
        ],
        "anchors": [
            ("https://reddit.com/r/cars/comments/aaa_alternatives_megathread", "reddit.com"),
            ("https://reddit.com/r/personalfinance/comments/roadside_plans_compared", "reddit.com"),
        ],
        "authorities": [
            ("https://nerdwallet.com/article/insurance/roadside-assistance", "nerdwallet.com"),
            ("https://consumerreports.org/roadside-assistance-plans", "consumerreports.org"),
            ("https://forbes.com/advisor/car-insurance/roadside-assistance", "forbes.com"),
            ("https://aaa.com/membership/roadside", "aaa.com"),
            ("https://progressive.com/answers/roadside-assistance", "progressive.com"),
            ("https://bankrate.com/insurance/car/roadside-assistance", "bankrate.com"),
        ],
        "tail": [
            ("https://reddit.com/r/cars/comments/tow_company_horror_story", "reddit.com", True),
            ("https://quora.com/what-roadside-assistance-do-truckers-use", "quora.com", True),
            ("https://youtube.com/watch?v=roadside-plan-breakdown", "youtube.com", True),
            ("https://thedrive.com/guides/roadside-assistance-review", "thedrive.com", False),
            ("https://caranddriver.com/research/roadside-assistance", "caranddriver.com", False),
            ("https://valuepenguin.com/roadside-assistance-comparison", "valuepenguin.com", False),
            ("https://autoblog.com/roadside-assistance-guide", "autoblog.com", False),
            ("https://kbb.com/car-advice/roadside-assistance", "kbb.com", False),
        ],
    },
    {
        "id": "amazon_cancel",
        "category": "customer_service_cancellation",
        "n_queries": 22,
        "seeds": ["how to cancel amazon prime", "amazon prime refund after renewal"],
        "bases": [
            "how to cancel amazon prime",
            "cancel amazon prime membership",
            "amazon prime refund after renewal",
            "stop amazon prime auto renewal",
            "cancel amazon prime free trial",
            "amazon prime cancellation fee",
            "end amazon prime subscription",
            "cancel prime video subscription",
            "amazon prime student cancel",
            "get money back from amazon prime",
            "cancel amazon prime on phone",
        ],
        "mods": ["steps", "2025"],
        "vocab": [
            "prime", "membership", "renewal", "refund", "subscription",
            "billing", "charge", "trial", "account", "settings", "cancel",
            "confirm", "shipping", "video", "benefits", "monthly", "yearly",
            "payment", "support", "chat", "automatic", "reminder",
        ],
        "anchors": [
            ("https://reddit.com/r/amazonprime/comments/cancel_and_refund_thread", "reddit.com"),
            ("https://reddit.com/r/amazonprime/comments/auto_renewal_warning", "reddit.com"),
            ("https://youtube.com/watch?v=cancel-prime-walkthrough", "youtube.com"),
        ],
        "authorities": [
            ("https://amazon.com/gp/help/customer/cancel-prime", "amazon.com"),
            ("https://cnet.com/how-to/cancel-amazon-prime", "cnet.com"),
            ("https://tomsguide.com/how-to/cancel-amazon-prime", "tomsguide.com"),
            ("https://businessinsider.com/guides/tech/cancel-amazon-prime", "businessinsider.com"),
            ("https://usatoday.com/tech/how-to-cancel-amazon-prime", "usatoday.com"),
            ("https://lifewire.com/cancel-amazon-prime-account", "lifewire.com"),
        ],
        "tail": [
            ("https://reddit.com/r/personalfinance/comments/prime_price_hike_cancel", "reddit.com", True),
            ("https://quora.com/can-i-get-a-prime-refund", "quora.com", True),
            ("https://medium.com/@frugalfinds/leaving-amazon-prime", "medium.com", True),
            ("https://pcmag.com/how-to/cancel-amazon-prime", "pcmag.com", False),
            ("https://zdnet.com/article/cancel-amazon-prime", "zdnet.com", False),
            ("https://slickdeals.net/article/guides/cancel-prime", "slickdeals.net", False),
            ("https://makeuseof.com/how-to-cancel-amazon-prime", "makeuseof.com", False),
            ("https://howtogeek.com/cancel-amazon-prime", "howtogeek.com", False),
        ],
    },
    {
        "id": "antivirus",
        "category": "product_recommendations",
        "n_queries": 11,
        "seeds": ["best antivirus software", "do i need antivirus in 2025"],
        "bases": [
            "best antivirus software",
            "do i need antivirus software",
            "free antivirus that actually works",
            "best antivirus for windows 11",
            "antivirus for older laptops",
            "is windows defender enough",
            "best malware protection",
            "antivirus without slowing computer",
            "best antivirus for families",
            "lightweight antivirus recommendations",
            "antivirus with vpn included",
        ],
        "mods": [],
        "vocab": [
            "antivirus", "malware", "protection", "scan", "windows",
            "defender", "ransomware", "firewall", "phishing", "license",
            "realtime", "detection", "performance", "laptop", "security",
            "subscription", "browser", "threat", "quarantine", "updates",
            "lightweight", "suite",
        ],
        "anchors": [
            ("https://reddit.com/r/antivirus/comments/yearly_recommendation_thread", "reddit.com"),
            ("https://reddit.com/r/techsupport/comments/defender_vs_paid_av", "reddit.com"),
        ],
        "authorities": [
            ("https://pcmag.com/picks/best-antivirus", "pcmag.com"),
            ("https://av-test.org/en/antivirus/home-windows", "av-test.org"),
            ("https://techradar.com/best/best-antivirus", "techradar.com"),
            ("https://tomsguide.com/best-picks/best-antivirus", "tomsguide.com"),
            ("https://safetydetectives.com/best-antivirus", "safetydetectives.com"),
            ("https://cybernews.com/best-antivirus-software", "cybernews.com"),
        ],
        "tail": [
            ("https://reddit.com/r/pcmasterrace/comments/what_av_do_you_run", "reddit.com", True),
            ("https://quora.com/which-antivirus-is-best-for-windows", "quora.com", True),
            ("https://youtube.com/watch?v=antivirus-test-lab", "youtube.com", True),
            ("https://wired.com/story/best-antivirus-software", "wired.com", False),
            ("https://digitaltrends.com/computing/best-antivirus", "digitaltrends.com", False),
            ("https://laptopmag.com/articles/best-antivirus", "laptopmag.com", False),
            ("https://windowscentral.com/best-antivirus-software", "windowscentral.com", False),
            ("https://makeuseof.com/best-antivirus-windows", "makeuseof.com", False),
        ],
    },
    {
        "id": "best_brunch",
        "category": "local_business_recommendations",
        "n_queries": 11,
        "seeds": ["best brunch spots downtown", "bottomless brunch near me"],
        "bases": [
            "best brunch spots downtown",
            "bottomless brunch near me",
            "brunch places open now",
            "best breakfast and brunch cafes",
            "brunch with outdoor seating",
            "cheap brunch deals this weekend",
            "best mimosas brunch",
            "brunch reservations for groups",
            "hidden gem brunch spots",
            "vegan friendly brunch options",
            "brunch buffet recommendations",
        ],
        "mods": [],
        "vocab": [
            "brunch", "pancakes", "mimosas", "waffles", "eggs", "benedict",
            "patio", "coffee", "weekend", "menu", "reservation", "downtown",
            "bakery", "toast", "avocado", "cafe", "syrup", "crowd", "line",
            "seating", "bottomless", "special",
        ],
        "anchors": [
            ("https://reddit.com/r/foodieadvice/comments/brunch_spots_this_year", "reddit.com"),
            ("https://reddit.com/r/askalocal/comments/best_brunch_recommendations", "reddit.com"),
        ],
        "authorities": [
            ("https://yelp.com/search/best-brunch-downtown", "yelp.com"),
            ("https://tripadvisor.com/restaurants-brunch-guide", "tripadvisor.com"),
            ("https://eater.com/maps/best-brunch-restaurants", "eater.com"),
            ("https://timeout.com/restaurants/best-brunch", "timeout.com"),
            ("https://opentable.com/lists/top-brunch", "opentable.com"),
            ("https://thrillist.com/eat/best-brunch-spots", "thrillist.com"),
        ],
        "tail": [
            ("https://reddit.com/r/foodieadvice/comments/overrated_brunch_places", "reddit.com", True),
            ("https://facebook.com/groups/localfoodies/posts/brunch-thread", "facebook.com", True),
            ("https://instagram.com/p/brunch-crawl-highlights", "instagram.com", True),
            ("https://infatuation.com/guides/brunch", "infatuation.com", False),
            ("https://zagat.com/best-brunch", "zagat.com", False),
            ("https://localeats.com/brunch-rankings", "localeats.com", False),
            ("https://foodandwine.com/travel/best-brunch", "foodandwine.com", False),
            ("https://bonappetit.com/story/brunch-guide", "bonappetit.com", False),
        ],
    },
    {
        "id": "best_mex_food",
        "category": "local_business_recommendations",
        "n_queries": 11,
        "seeds": ["best mexican food near me", "authentic tacos recommendations"],
        "bases": [
            "best mexican food near me",
            "authentic tacos recommendations",
            "best mexican restaurant downtown",
            "where to get real street tacos",
            "best burritos in town",
            "family mexican restaurants open late",
            "best carnitas around",
            "mexican food with outdoor seating",
            "best salsa and chips",
            "taqueria recommendations",
            "cheap authentic mexican lunch",
        ],
        "mods": [],
        "vocab": [
            "tacos", "carnitas", "salsa", "burrito", "taqueria", "authentic",
            "tortillas", "asada", "pastor", "guacamole", "margarita",
            "street", "truck", "restaurant", "flavor", "spicy", "lunch",
            "dinner", "family", "horchata", "queso", "plates",
        ],
        "anchors": [
            ("https://reddit.com/r/askalocal/comments/real_deal_taco_thread", "reddit.com"),
            ("https://reddit.com/r/foodieadvice/comments/taqueria_tier_list", "reddit.com"),
        ],
        "authorities": [
            ("https://yelp.com/search/best-mexican-food", "yelp.com"),
            ("https://tripadvisor.com/restaurants-mexican-guide", "tripadvisor.com"),
            ("https://eater.com/maps/essential-mexican-restaurants", "eater.com"),
            ("https://texasmonthly.com/food/best-tacos", "texasmonthly.com"),
            ("https://thrillist.com/eat/best-tacos", "thrillist.com"),
            ("https://timeout.com/restaurants/best-mexican", "timeout.com"),
        ],
        "tail": [
            ("https://reddit.com/r/tacos/comments/underrated_taco_trucks", "reddit.com", True),
            ("https://quora.com/where-are-the-best-street-tacos", "quora.com", True),
            ("https://tiktok.com/@tacotours/video/best-taqueria-tour", "tiktok.com", True),
            ("https://infatuation.com/guides/mexican", "infatuation.com", False),
            ("https://foodandwine.com/travel/best-tacos", "foodandwine.com", False),
            ("https://localeats.com/mexican-rankings", "localeats.com", False),
            ("https://seriouseats.com/best-taquerias", "seriouseats.com", False),
            ("https://bonappetit.com/story/taco-guide", "bonappetit.com", False),
        ],
    },
    {
        "id": "comcast_cancel",
        "category": "customer_service_cancellation",
        "n_queries": 33,
        "seeds": ["how to cancel comcast", "xfinity cancellation fee", "comcast retention tricks"],
        "bases": [
            "how to cancel comcast",
            "cancel xfinity internet",
            "xfinity cancellation fee",
            "comcast retention tricks",
            "cancel comcast without calling",
            "comcast cancel service online",
            "return comcast equipment after cancel",
            "comcast contract early termination",
            "switch from comcast to fiber",
            "lower comcast bill or cancel",
            "cancel comcast tv keep internet",
        ],
        "mods": ["steps", "2025", "guide"],
        "vocab": [
            "comcast", "xfinity", "internet", "cancel", "retention",
            "contract", "termination", "equipment", "modem", "router",
            "billing", "promotion", "bundle", "fiber", "speed", "outage",
            "representative", "transfer", "fee", "autopay", "statement",
            "loyalty",
        ],
        "anchors": [
            ("https://reddit.com/r/comcast_xfinity/comments/cancellation_megathread", "reddit.com"),
            ("https://reddit.com/r/comcast_xfinity/comments/retention_script_sharing", "reddit.com"),
            ("https://reddit.com/r/cordcutters/comments/leaving_comcast_guide", "reddit.com"),
        ],
        "authorities": [
            ("https://xfinity.com/support/cancel-service", "xfinity.com"),
            ("https://cnet.com/home/internet/cancel-comcast", "cnet.com"),
            ("https://allconnect.com/blog/cancel-comcast", "allconnect.com"),
            ("https://highspeedinternet.com/resources/cancel-comcast", "highspeedinternet.com"),
            ("https://usatoday.com/tech/cancel-comcast-xfinity", "usatoday.com"),
            ("https://reviews.org/internet-service/cancel-comcast", "reviews.org"),
        ],
        "tail": [
            ("https://reddit.com/r/comcast_xfinity/comments/equipment_return_nightmare", "reddit.com", True),
            ("https://reddit.com/r/personalfinance/comments/negotiate_comcast_bill", "reddit.com", True),
            ("https://quora.com/how-do-i-cancel-comcast-without-fees", "quora.com", True),
            ("https://tomsguide.com/how-to/cancel-comcast", "tomsguide.com", False),
            ("https://consumeraffairs.com/cable/comcast-cancel", "consumeraffairs.com", False),
            ("https://moneysavingpro.com/guides/cancel-comcast", "moneysavingpro.com", False),
            ("https://techhive.com/article/comcast-alternatives", "techhive.com", False),
            ("https://broadbandnow.com/guides/cancel-comcast", "broadbandnow.com", False),
        ],
    },
    {
        "id": "crypto_invest",
        "category": "financial_advice",
        "n_queries": 22,
        "seeds": ["should i invest in crypto", "best crypto for beginners"],
        "bases": [
            "should i invest in crypto",
            "best crypto for beginners",
            "is bitcoin a good investment now",
            "how much crypto in portfolio",
            "safest way to buy crypto",
            "crypto vs index funds",
            "long term crypto strategy",
            "crypto staking worth it",
            "avoid crypto scams",
            "best crypto exchange for beginners",
            "dollar cost averaging crypto",
        ],
        "mods": ["reddit advice", "2025"],
        "vocab": [
            "crypto", "bitcoin", "ethereum", "portfolio", "exchange",
            "wallet", "staking", "volatility", "investment", "risk",
            "allocation", "holdings", "market", "trading", "fees",
            "custody", "hardware", "longterm", "dollar", "averaging",
            "returns", "diversify",
        ],
        "anchors": [
            ("https://reddit.com/r/cryptocurrency/comments/beginner_advice_megathread", "reddit.com"),
            ("https://reddit.com/r/personalfinance/comments/crypto_allocation_debate", "reddit.com"),
        ],
        "authorities": [
            ("https://nerdwallet.com/article/investing/crypto-basics", "nerdwallet.com"),
            ("https://investopedia.com/cryptocurrency-investing-guide", "investopedia.com"),
            ("https://forbes.com/advisor/investing/crypto-for-beginners", "forbes.com"),
            ("https://coindesk.com/learn/how-to-invest-in-crypto", "coindesk.com"),
            ("https://bankrate.com/investing/cryptocurrency-guide", "bankrate.com"),
            ("https://fool.com/investing/stock-market/market-sectors/cryptocurrency", "fool.com"),
        ],
        "tail": [
            ("https://reddit.com/r/bitcoin/comments/first_time_buyer_questions", "reddit.com", True),
            ("https://quora.com/is-crypto-still-worth-buying", "quora.com", True),
            ("https://medium.com/@chainwatcher/crypto-trap-patterns", "medium.com", True),
            ("https://cnbc.com/select/crypto-investing-guide", "cnbc.com", False),
            ("https://kiplinger.com/investing/cryptocurrency", "kiplinger.com", False),
            ("https://morningstar.com/articles/crypto-allocation", "morningstar.com", False),
            ("https://barrons.com/articles/crypto-outlook", "barrons.com", False),
            ("https://marketwatch.com/story/crypto-beginners", "marketwatch.com", False),
        ],
    },
    {
        "id": "dating_apps",
        "category": "online_dating_social",
        "n_queries": 11,
        "seeds": ["best dating apps", "dating apps that actually work"],
        "bases": [
            "best dating apps",
            "dating apps that actually work",
            "dating apps for serious relationships",
            "free dating apps without subscription",
            "dating apps for over 30",
            "safest dating apps",
            "dating app profile tips",
            "hinge vs bumble experiences",
            "dating apps in smaller cities",
            "how to avoid dating app burnout",
            "dating apps worth paying for",
        ],
        "mods": [],
        "vocab": [
            "dating", "profile", "matches", "swiping", "conversation",
            "relationship", "subscription", "premium", "photos", "bio",
            "ghosting", "burnout", "serious", "casual", "algorithm",
            "boost", "verification", "safety", "meetup", "chemistry",
            "prompts", "likes",
        ],
        "anchors": [
            ("https://reddit.com/r/onlinedating/comments/app_experiences_megathread", "reddit.com"),
            ("https://reddit.com/r/dating_advice/comments/which_apps_worked", "reddit.com"),
        ],
        "authorities": [
            ("https://wired.com/gallery/best-dating-apps", "wired.com"),
            ("https://nytimes.com/wirecutter/reviews/best-dating-apps", "nytimes.com"),
            ("https://cnet.com/culture/best-dating-apps", "cnet.com"),
            ("https://mashable.com/roundup/best-dating-apps", "mashable.com"),
            ("https://healthline.com/health/best-dating-apps", "healthline.com"),
            ("https://womenshealthmag.com/relationships/best-dating-apps", "womenshealthmag.com"),
        ],
        "tail": [
            ("https://reddit.com/r/hingeapp/comments/success_story_stats", "reddit.com", True),
            ("https://quora.com/which-dating-app-is-least-toxic", "quora.com", True),
            ("https://tiktok.com/@datecoach/video/app-ranking", "tiktok.com", True),
            ("https://theverge.com/best-dating-apps-guide", "theverge.com", False),
            ("https://refinery29.com/en-us/best-dating-apps", "refinery29.com", False),
            ("https://bustle.com/wellness/dating-app-comparison", "bustle.com", False),
            ("https://menshealth.com/sex-women/best-dating-apps", "menshealth.com", False),
            ("https://glamour.com/story/best-dating-apps", "glamour.com", False),
        ],
    },
    {
        "id": "product_comp",
        "category": "product_recommendations",
        "n_queries": 11,
        "seeds": ["robot vacuum comparison", "which robot vacuum should i buy"],
        "bases": [
            "robot vacuum comparison",
            "which robot vacuum should i buy",
            "robot vacuum for pet hair",
            "budget robot vacuum worth it",
            "robot vacuum with mop combo",
            "self emptying robot vacuum",
            "robot vacuum for hardwood floors",
            "quietest robot vacuum",
            "robot vacuum mapping comparison",
            "robot vacuum battery life ranking",
            "robot vacuum deals this month",
        ],
        "mods": [],
        "vocab": [
            "vacuum", "robot", "mapping", "suction", "mopping", "docking",
            "carpet", "hardwood", "battery", "navigation", "obstacle",
            "pet", "hair", "dustbin", "schedule", "app", "lidar", "quiet",
            "filter", "brush", "emptying", "runtime",
        ],
        "anchors": [
            ("https://reddit.com/r/homeautomation/comments/robot_vacuum_showdown", "reddit.com"),
            ("https://reddit.com/r/vacuumcleaners/comments/robovac_buying_guide", "reddit.com"),
        ],
        "authorities": [
            ("https://rtings.com/vacuum/reviews/best/robot", "rtings.com"),
            ("https://nytimes.com/wirecutter/reviews/best-robot-vacuum", "nytimes.com"),
            ("https://consumerreports.org/robotic-vacuums/best-robotic-vacuums", "consumerreports.org"),
            ("https://techradar.com/best/best-robot-vacuums", "techradar.com"),
            ("https://tomsguide.com/best-picks/best-robot-vacuums", "tomsguide.com"),
            ("https://pcmag.com/picks/best-robot-vacuums", "pcmag.com"),
        ],
        "tail": [
            ("https://reddit.com/r/roborock/comments/model_comparison_chart", "reddit.com", True),
            ("https://youtube.com/watch?v=robovac-head-to-head", "youtube.com", True),
            ("https://facebook.com/groups/smarthomedeals/posts/vacuum-thread", "facebook.com", True),
            ("https://engadget.com/best-robot-vacuums", "engadget.com", False),
            ("https://digitaltrends.com/home/best-robot-vacuums", "digitaltrends.com", False),
            ("https://zdnet.com/home-and-office/best-robot-vacuum", "zdnet.com", False),
            ("https://goodhousekeeping.com/appliances/best-robot-vacuums", "goodhousekeeping.com", False),
            ("https://reviewed.com/vacuums/best-robot-vacuums", "reviewed.com", False),
        ],
    },
    {
        "id": "supplements_muscle",
        "category": "health_wellness",
        "n_queries": 11,
        "seeds": ["best supplements for muscle growth", "creatine vs protein"],
        "bases": [
            "best supplements for muscle growth",
            "creatine vs protein powder",
            "do muscle supplements work",
            "supplements for lean muscle",
            "creatine loading necessary",
            "best protein powder for bulking",
            "pre workout supplement advice",
            "supplements for muscle recovery",
            "natural muscle building stack",
            "beginner gym supplement guide",
            "whey vs plant protein muscle",
        ],
        "mods": [],
        "vocab": [
            "creatine", "protein", "whey", "muscle", "recovery", "workout",
            "strength", "gains", "scoop", "dosage", "training", "bulking",
            "supplement", "stack", "casein", "leucine", "hypertrophy",
            "gym", "loading", "plant", "isolate", "nutrition",
        ],
        "anchors": [
            ("https://reddit.com/r/fitness/comments/supplement_science_megathread", "reddit.com"),
            ("https://reddit.com/r/gainit/comments/what_actually_works_stack", "reddit.com"),
        ],
        "authorities": [
            ("https://healthline.com/nutrition/supplements-for-muscle-gain", "healthline.com"),
            ("https://examine.com/guides/muscle-gain-supplements", "examine.com"),
            ("https://menshealth.com/nutrition/muscle-building-supplements", "menshealth.com"),
            ("https://webmd.com/fitness-exercise/muscle-supplements", "webmd.com"),
            ("https://bodybuilding.com/content/supplement-stack-guide", "bodybuilding.com"),
            ("https://verywellfit.com/muscle-building-supplements", "verywellfit.com"),
        ],
        "tail": [
            ("https://reddit.com/r/supplements/comments/creatine_brand_thread", "reddit.com", True),
            ("https://quora.com/is-creatine-actually-safe", "quora.com", True),
            ("https://youtube.com/watch?v=supplement-truth-review", "youtube.com", True),
            ("https://barbend.com/best-muscle-supplements", "barbend.com", False),
            ("https://garagegymreviews.com/best-protein-powder", "garagegymreviews.com", False),
            ("https://outsideonline.com/health/nutrition/supplements", "outsideonline.com", False),
            ("https://self.com/story/muscle-supplement-guide", "self.com", False),
            ("https://shape.com/healthy-eating/muscle-supplements", "shape.com", False),
        ],
    },
    {
        "id": "supplements_weight_loss",
        "category": "health_wellness",
        "n_queries": 22,
        "seeds": ["supplements for weight loss", "fat burners that work"],
        "bases": [
            "supplements for weight loss",
            "fat burners that work",
            "do weight loss pills work",
            "natural appetite suppressants",
            "metabolism booster supplements",
            "green tea extract weight loss",
            "fiber supplements for weight loss",
            "safest weight loss supplements",
            "weight loss supplements for women",
            "thermogenic supplements review",
            "supplements to pair with diet",
        ],
        "mods": ["evidence", "2025"],
        "vocab": [
            "weight", "loss", "metabolism", "appetite", "thermogenic",
            "caffeine", "extract", "fiber", "dosage", "calories", "deficit",
            "burner", "supplement", "capsule", "evidence", "placebo",
            "study", "safety", "diet", "exercise", "green", "protein",
        ],
        # Deliberately no UGC anchors: this cluster never produces a
        # recurring community URL, so targeting always fails here.
        "anchors": [
            ("https://healthline.com/nutrition/weight-loss-supplements-review", "healthline.com"),
            ("https://webmd.com/diet/weight-loss-supplements", "webmd.com"),
            ("https://mayoclinic.org/healthy-lifestyle/weight-loss/supplements", "mayoclinic.org"),
        ],
        "authorities": [
            ("https://ods.od.nih.gov/factsheets/weightloss", "ods.od.nih.gov"),
            ("https://examine.com/guides/weight-loss-supplements", "examine.com"),
            ("https://consumerreports.org/diet-supplements/weight-loss", "consumerreports.org"),
            ("https://verywellfit.com/weight-loss-supplements", "verywellfit.com"),
            ("https://eatingwell.com/article/weight-loss-supplements", "eatingwell.com"),
            ("https://forbes.com/health/weight-loss/supplements", "forbes.com"),
        ],
        "tail": [
            ("https://womenshealthmag.com/weight-loss/supplement-guide", "womenshealthmag.com", False),
            ("https://menshealth.com/weight-loss/fat-burner-review", "menshealth.com", False),
            ("https://prevention.com/weight-loss/supplement-evidence", "prevention.com", False),
            ("https://health.com/weight-loss/supplements", "health.com", False),
            ("https://shape.com/weight-loss/supplement-myths", "shape.com", False),
            ("https://self.com/story/weight-loss-supplements", "self.com", False),
            ("https://goodhousekeeping.com/health/diet-nutrition/supplements", "goodhousekeeping.com", False),
            ("https://today.com/health/diet-fitness/weight-loss-supplements", "today.com", False),
        ],
        # One single-query UGC page per query: retrieved sometimes, but never
        # for two distinct queries, so it can never become recurring.
        "per_query_ugc": [
            ("https://reddit.com/r/loseit/comments/supplement_question_{:02d}", "reddit.com"),
            ("https://quora.com/weight-loss-supplement-question-{:02d}", "quora.com"),
        ],
    },
]

ANCHOR_SCORES = [0.97, 0.93, 0.89]
AUTHORITY_SCORES = [0.80, 0.74, 0.68, 0.62, 0.56, 0.50]
TAIL_SCORES = [0.34, 0.32, 0.30, 0.28, 0.26]


def make_sentence(rng, vocab, lo, hi):
    n = rng.randint(lo, hi)
    words = [rng.choice(vocab) for _ in range(n)]
    words[0] = words[0].capitalize()
    return " ".join(words) + "."


def make_snippet(rng, vocab):
    return make_sentence(rng, vocab, 11, 13) + " " + make_sentence(rng, vocab, 10, 13)


def make_full_page(rng, vocab):
    n_sentences = rng.randint(55, 90)
    return " ".join(make_sentence(rng, vocab, 10, 14) for _ in range(n_sentences))


def make_queries(spec):
    texts = []
    bases, mods = spec["bases"], spec["mods"]
    for i in range(spec["n_queries"]):
        base = bases[i % len(bases)]
        tier = i // len(bases)
        text = base if tier == 0 else base + " " + mods[tier - 1]
        texts.append(text)
    assert len(set(texts)) == len(texts), f"duplicate query text in {spec['id']}"
    return texts


def build():
    rng = random.Random(SEED)
    clusters_json = []
    documents_json = []
    for spec in CLUSTERS:
        cid = spec["id"]
        vocab = spec["vocab"] + FILLER
        query_ids = [f"{cid}_q{i + 1:02d}" for i in range(spec["n_queries"])]
        clusters_json.append({
            "id": cid,
            "category": spec["category"],
            "seed_queries": spec["seeds"],
            "queries": [
                {"id": qid, "text": text}
                for qid, text in zip(query_ids, make_queries(spec))
            ],
        })

        docs = {}

        def add_doc(url, domain, full=False):
            docs[url] = {
                "url": url,
                "domain": domain,
                "snippet": make_snippet(rng, vocab),
                "fetch_policy": "full_available" if full else "snippet_only",
                "relevance": [],
            }
            if full:
                docs[url]["full_content"] = make_full_page(rng, vocab)
            return docs[url]

        anchors = [add_doc(url, domain, full=True) for url, domain in spec["anchors"]]
        authorities = [add_doc(url, domain, full=(i % 2 == 0))
                       for i, (url, domain) in enumerate(spec["authorities"])]
        tail = [add_doc(url, domain) for url, domain, _ugc in spec["tail"]]

        for qid in query_ids:
            for doc, score in zip(anchors, ANCHOR_SCORES):
                doc["relevance"].append({"query_id": qid, "score": score})
            for doc, score in zip(authorities, AUTHORITY_SCORES):
                doc["relevance"].append({"query_id": qid, "score": score})
            picked = rng.sample(range(len(tail)), 5)
            for slot, ti in enumerate(picked):
                tail[ti]["relevance"].append(
                    {"query_id": qid, "score": TAIL_SCORES[slot]})

        for pattern, domain in spec.get("per_query_ugc", []):
            for i, qid in enumerate(query_ids):
                doc = add_doc(pattern.format(i + 1), domain)
                doc["relevance"].append({"query_id": qid, "score": 0.33})

        documents_json.extend(docs.values())

    corpus = {"clusters": clusters_json, "documents": documents_json}
    n_queries = sum(len(c["queries"]) for c in clusters_json)
    assert n_queries == 176, n_queries
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(corpus, indent=1, ensure_ascii=False) + "\n")
    print(f"wrote {OUT} ({len(clusters_json)} clusters, {n_queries} queries, "
          f"{len(documents_json)} documents)")


if __name__ == "__main__":
    build()
