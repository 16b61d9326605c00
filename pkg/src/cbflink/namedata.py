"""Bundled name and address tables for the synthetic sampler.

US-style given names and surnames plus North-Carolina-flavored
(city, zipcode) pairs, each in descending frequency order.  Weights
follow a 1/rank profile, so sampling at skew 1.0 is head-heavy like a
real roll; skew 0.0 samples the tables uniformly, which emulates the
sparsity of drawing a few thousand records out of a multi-million
population.
"""

_GIVEN_RANKED = (
    "james", "mary", "john", "robert", "patricia", "michael", "linda", "william",
    "elizabeth", "david", "barbara", "richard", "susan", "joseph", "jessica",
    "thomas", "sarah", "charles", "karen", "nancy", "christopher", "lisa",
    "daniel", "betty", "matthew", "margaret", "anthony", "sandra", "mark",
    "ashley", "donald", "kimberly", "steven", "emily", "paul", "donna",
    "andrew", "michelle", "joshua", "carol", "kenneth", "amanda", "kevin",
    "dorothy", "brian", "melissa", "george", "deborah", "timothy", "stephanie",
    "ronald", "rebecca", "jason", "sharon", "edward", "laura", "jeffrey",
    "cynthia", "ryan", "kathleen", "jacob", "amy", "gary", "angela",
    "nicholas", "shirley", "eric", "anna", "jonathan", "brenda", "stephen",
    "pamela", "larry", "emma", "justin", "nicole", "scott", "helen",
    "brandon", "samantha", "benjamin", "katherine", "samuel", "christine",
    "gregory", "debra", "alexander", "rachel", "patrick", "carolyn", "frank",
    "janet", "raymond", "maria", "jack", "catherine", "dennis", "heather",
    "jerry", "diane", "tyler", "olivia", "aaron", "julie", "jose", "joyce",
    "adam", "victoria", "nathan", "ruth", "henry", "virginia", "zachary",
    "lauren", "douglas", "kelly", "peter", "christina", "kyle", "joan",
    "noah", "evelyn", "ethan", "judith", "jeremy", "andrea", "walter",
    "hannah", "christian", "megan", "keith", "cheryl", "roger", "jacqueline",
    "terry", "martha", "austin", "madison", "sean", "teresa", "gerald",
    "gloria", "carl", "sara", "dylan", "janice", "harold", "ann", "jordan",
    "kathryn", "jesse", "abigail", "bryan", "sophia", "lawrence", "frances",
    "arthur", "jean", "gabriel", "alice", "wayne", "judy", "roy", "isabella",
    "louis", "julia", "philip", "grace", "bobby", "amber", "johnny",
    "denise", "bradley", "danielle", "russell", "marilyn", "vincent",
    "beverly", "eugene", "charlotte", "randy", "natalie", "bruce", "theresa",
    "willie", "diana", "alan", "brittany", "juan", "doris", "albert",
    "kayla", "joe", "alexis", "billy", "lori", "ralph", "marie", "gabriela",
    "erin", "howard", "chloe", "fred", "tiffany", "curtis", "michele",
    "craig", "allison", "carlos", "gail", "stanley", "melanie", "leonard",
    "wanda", "earl", "loretta", "norman", "beth", "marcus", "tracy",
    "travis", "ella", "oscar", "roberta", "derek", "monica", "warren",
    "dawn", "darrell", "yolanda", "alfred", "stella", "bernard", "lucy",
    "leroy", "priscilla", "marvin", "naomi", "glenn", "carmen", "todd",
    "rosa", "lester", "leah", "dean", "paula", "gordon", "irene", "drew",
    "audrey", "milton", "renee", "gilbert", "vivian", "martin", "claire",
    "dale", "josephine", "byron", "michaela", "vernon", "faith", "neil",
    "daisy", "ross", "vanessa", "herman", "hazel", "dustin", "lillian",
    "clifford", "esther", "calvin", "june", "otis", "eleanor", "hugh",
    "dana", "wesley", "rosemary", "ivan", "bonnie", "felix", "tamara",
    "leon", "sylvia", "edgar", "regina", "dwight", "kara", "omar",
    "bianca", "cedric", "ingrid", "rufus", "opal", "quentin", "mabel",
    "ernest", "flora", "clinton", "greta", "boris", "celia", "emmett",
    "nadia", "floyd", "petra", "silas", "bridget", "amos", "harriet",
    "conrad", "lydia", "duane", "marcia", "elmer", "noreen", "garrett",
    "selena", "horace", "tabitha", "irving", "ursula", "jasper", "velma",
    "kermit", "wilma", "lionel", "yvonne", "mitchell", "zelda", "nolan",
    "adele", "orville", "bernice", "percy", "colleen", "quincy", "delia",
    "ramon", "elena", "sidney", "fern", "titus", "geneva", "ulysses",
    "hope", "virgil", "iris", "wade", "jade", "xavier", "kendra",
)

_SURNAME_RANKED = (
    "smith", "johnson", "williams", "brown", "jones", "garcia", "miller",
    "davis", "rodriguez", "martinez", "hernandez", "lopez", "gonzalez",
    "wilson", "anderson", "thomas", "taylor", "moore", "jackson", "martin",
    "lee", "perez", "thompson", "white", "harris", "sanchez", "clark",
    "ramirez", "lewis", "robinson", "walker", "young", "allen", "king",
    "wright", "scott", "torres", "nguyen", "hill", "flores", "green",
    "adams", "nelson", "baker", "hall", "rivera", "campbell", "mitchell",
    "carter", "roberts", "gomez", "phillips", "evans", "turner", "diaz",
    "parker", "cruz", "edwards", "collins", "reyes", "stewart", "morris",
    "morales", "murphy", "cook", "rogers", "gutierrez", "ortiz", "morgan",
    "cooper", "peterson", "bailey", "reed", "kelly", "howard", "ramos",
    "kim", "cox", "ward", "richardson", "watson", "brooks", "chavez",
    "wood", "james", "bennett", "gray", "mendoza", "ruiz", "hughes",
    "price", "alvarez", "castillo", "sanders", "patel", "myers", "long",
    "ross", "foster", "jimenez", "powell", "jenkins", "perry", "russell",
    "sullivan", "bell", "coleman", "butler", "henderson", "barnes",
    "fisher", "vasquez", "simmons", "griffin", "hayes", "ferguson",
    "wallace", "woods", "cole", "west", "owens", "reynolds", "gordon",
    "hamilton", "graham", "dunn", "shaw", "mcdonald", "ellis", "tran",
    "medina", "aguilar", "stevens", "murray", "ford", "castro", "marshall",
    "owen", "harrison", "fernandez", "gibson", "mcdaniel", "wagner",
    "dixon", "freeman", "burns", "gardner", "warren", "hart", "salazar",
    "wells", "crawford", "knight", "hudson", "carroll", "duncan", "cunningham",
    "spencer", "hicks", "palmer", "arnold", "black", "holmes", "boyd",
    "mills", "rice", "schmidt", "webb", "stone", "olson", "fox", "berry",
    "hansen", "porter", "hunter", "lane", "mason", "robertson", "grant",
    "daniels", "kennedy", "silva", "meyer", "weaver", "vargas", "pearson",
    "andrews", "wheeler", "burton", "romero", "fuller", "lawrence",
    "lambert", "welch", "hanson", "day", "elliott", "montgomery", "fields",
    "curtis", "carpenter", "austin", "miles", "lyons", "larson", "willis",
    "byrd", "moreno", "hopkins", "terry", "watkins", "fleming", "barker",
    "george", "norris", "holland", "padilla", "walters", "bishop", "oliver",
    "harvey", "howell", "burke", "lynch", "hoffman", "gilbert", "dean",
    "marsh", "nichols", "barrett", "stanley", "frazier", "hale", "pierce",
    "stokes", "newman", "garner", "brewer", "casey", "delgado", "norton",
    "reeves", "pratt", "curry", "todd", "mccoy", "chambers", "guzman",
    "saunders", "bowen", "rowe", "horton", "greer", "klein", "cobb",
    "bates", "garrett", "atkins", "ballard", "moody", "osborne", "colon",
    "stephens", "summers", "bryant", "mann", "glover", "leonard", "farmer",
    "fowler", "pope", "doyle", "hammond", "strickland", "mullins", "park",
    "malone", "goodman", "swanson", "ybarra", "hodges", "sharp", "bowman",
    "barton", "joseph", "walsh", "gregory", "cummings", "love", "bradley",
    "macdonald", "poole", "mathis", "floyd", "vaughn", "pittman", "hines",
    "nash", "clarke", "cantrell", "baldwin", "shelton", "lowe", "rhodes",
    "maxwell", "franco", "conner", "melton", "mcguire", "blair", "hancock",
    "willard", "pruitt", "kent", "booth", "crane", "mckee", "kerr",
    "buckley", "benton", "downs", "cline", "keller", "weber", "sims",
    "tucker", "barber", "yates", "ayala", "salas", "ochoa", "mccarthy",
    "winters", "dalton", "durham", "snider", "petty", "blake", "boone",
    "calderon", "conley", "frost", "golden", "haney", "ingram", "joyner",
    "kaufman", "landry", "mercer", "noble", "odonnell", "pace", "quinn",
    "ratliff", "sampson", "tanner", "underwood", "valencia", "whitaker",
    "york", "zamora", "abbott", "bender", "chandler", "dickson", "eaton",
    "farrell", "goss", "hubbard", "irwin", "jarvis", "kemp", "lucero",
    "mead", "newton", "orr", "parrish", "quintero", "rosales", "sexton",
    "talley", "upton", "vance", "whitfield", "xiong", "yoder", "zuniga",
    "ashford", "blanchard", "coates", "dodson", "emerson", "finley",
    "goodwin", "hatfield", "ives", "jennings", "kirby", "lockhart",
    "merritt", "nolan", "osborn", "prince", "randall", "sloan", "tillman",
    "vinson", "wooten", "yarbrough", "ainsworth", "bagley", "cardwell",
    "denton", "eldridge", "fontaine", "gilmore", "hargrove", "isley",
    "jessup", "kendrick", "lamm", "mangum", "nixon", "overton",
    "pegram", "quigley", "rector", "satterfield", "tart", "usher",
    "venable", "weathers", "yount", "zachary", "alston", "braswell",
    "creech", "dellinger", "eubanks", "faircloth", "gurley", "honeycutt",
    "icard", "jernigan", "kiser", "lassiter", "mewborn", "narron",
    "outlaw", "pender", "queen", "rouse", "sugg", "teague", "upchurch",
    "vick", "whitley", "yelton", "zirkle", "autry", "bunn", "capps",
    "deese", "edgerton", "futrell", "gaddy", "hinnant", "ipock",
    "josey", "knox", "loftin", "modlin", "nethercutt", "oakley",
    "pittard", "raynor", "setzer", "tyndall", "uzzell", "vause",
    "warrick", "yopp", "zeigler", "barefoot", "cashwell", "dail",
    "efird", "fonville", "gooding", "hasty", "ivey", "jolly", "keech",
    "lanier", "mintz", "noles", "oxendine", "parnell", "quate", "rabon",
    "sasser", "tew", "ururoa", "varner", "winslow", "yow", "zell",
)

# (city, base zipcode); the sampler varies the last two digits per
# entity, so only the prefix identifies the place.
_CITY_RANKED = (
    ("charlotte", "28202"), ("raleigh", "27601"), ("greensboro", "27401"),
    ("durham", "27701"), ("winston salem", "27101"), ("fayetteville", "28301"),
    ("cary", "27511"), ("wilmington", "28401"), ("high point", "27260"),
    ("concord", "28025"), ("asheville", "28801"), ("greenville", "27834"),
    ("gastonia", "28052"), ("jacksonville", "28540"), ("chapel hill", "27514"),
    ("rocky mount", "27801"), ("huntersville", "28078"), ("burlington", "27215"),
    ("wilson", "27893"), ("kannapolis", "28081"), ("apex", "27502"),
    ("hickory", "28601"), ("goldsboro", "27530"), ("indian trail", "28079"),
    ("mooresville", "28115"), ("wake forest", "27587"), ("monroe", "28110"),
    ("salisbury", "28144"), ("new bern", "28560"), ("holly springs", "27540"),
    ("matthews", "28105"), ("sanford", "27330"), ("garner", "27529"),
    ("cornelius", "28031"), ("thomasville", "27360"), ("asheboro", "27203"),
    ("statesville", "28677"), ("mint hill", "28227"), ("kernersville", "27284"),
    ("morrisville", "27560"), ("fuquay varina", "27526"), ("lumberton", "28358"),
    ("kinston", "28501"), ("carrboro", "27510"), ("havelock", "28532"),
    ("shelby", "28150"), ("clemmons", "27012"), ("lexington", "27292"),
    ("elizabeth city", "27909"), ("boone", "28607"), ("hope mills", "28348"),
    ("clayton", "27520"), ("henderson", "27536"), ("eden", "27288"),
    ("albemarle", "28001"), ("morganton", "28655"), ("pinehurst", "28374"),
    ("laurinburg", "28352"), ("graham", "27253"), ("lenoir", "28645"),
    ("mount airy", "27030"), ("roanoke rapids", "27870"), ("washington", "27889"),
    ("smithfield", "27577"), ("tarboro", "27886"), ("hendersonville", "28792"),
    ("brevard", "28712"), ("oxford", "27565"), ("southern pines", "28387"),
    ("mebane", "27302"), ("waynesville", "28786"), ("hillsborough", "27278"),
    ("knightdale", "27545"), ("leland", "28451"), ("carolina beach", "28428"),
    ("morehead city", "28557"), ("newton", "28658"), ("harrisburg", "28075"),
    ("weddington", "28104"), ("stallings", "28106"), ("archdale", "27263"),
    ("waxhaw", "28173"), ("elon", "27244"), ("belmont", "28012"),
    ("lincolnton", "28092"), ("mount holly", "28120"), ("reidsville", "27320"),
    ("aberdeen", "28315"), ("dunn", "28334"), ("pineville", "28134"),
    ("black mountain", "28711"), ("kings mountain", "28086"), ("forest city", "28043"),
    ("marion", "28752"), ("wadesboro", "28170"), ("siler city", "27344"),
    ("wendell", "27591"), ("zebulon", "27597"), ("rolesville", "27571"),
    ("louisburg", "27549"), ("nashville", "27856"), ("ahoskie", "27910"),
    ("edenton", "27932"), ("williamston", "27892"), ("plymouth", "27962"),
    ("windsor", "27983"), ("murfreesboro", "27855"), ("wallace", "28466"),
    ("clinton", "28328"), ("whiteville", "28472"), ("elizabethtown", "28337"),
    ("red springs", "28377"), ("raeford", "28376"), ("spring lake", "28390"),
    ("erwin", "28339"), ("benson", "27504"), ("angier", "27501"),
    ("fuquay", "27525"), ("selma", "27576"), ("princeton", "27569"),
    ("fremont", "27830"), ("snow hill", "28580"), ("farmville", "27828"),
    ("ayden", "28513"), ("winterville", "28590"), ("grifton", "28530"),
    ("vanceboro", "28586"), ("bridgeton", "28519"), ("oriental", "28571"),
    ("bayboro", "28515"), ("beaufort", "28516"), ("newport", "28570"),
    ("swansboro", "28584"), ("richlands", "28574"), ("maysville", "28555"),
    ("burgaw", "28425"), ("hampstead", "28443"), ("surf city", "28445"),
    ("shallotte", "28470"), ("southport", "28461"), ("oak island", "28465"),
    ("boiling springs", "28017"), ("cherryville", "28021"), ("dallas", "28034"),
    ("stanley", "28164"), ("denver", "28037"), ("maiden", "28650"),
    ("conover", "28613"), ("claremont", "28610"), ("taylorsville", "28681"),
    ("granite falls", "28630"), ("hudson", "28638"), ("sawmills", "28665"),
    ("valdese", "28690"), ("drexel", "28619"), ("glen alpine", "28628"),
    ("old fort", "28762"), ("swannanoa", "28778"), ("weaverville", "28787"),
    ("mars hill", "28754"), ("burnsville", "28714"), ("spruce pine", "28777"),
    ("bakersville", "28705"), ("newland", "28657"), ("banner elk", "28604"),
    ("blowing rock", "28605"), ("west jefferson", "28694"), ("sparta", "28675"),
    ("elkin", "28621"), ("dobson", "27017"), ("pilot mountain", "27041"),
    ("king", "27021"), ("walnut cove", "27052"), ("madison", "27025"),
    ("stoneville", "27048"), ("yanceyville", "27379"), ("roxboro", "27573"),
    ("creedmoor", "27522"), ("butner", "27509"), ("stem", "27581"),
    ("franklinton", "27525"), ("warrenton", "27589"), ("littleton", "27850"),
    ("enfield", "27823"), ("scotland neck", "27874"), ("rich square", "27869"),
    ("jackson", "27845"), ("gatesville", "27938"), ("hertford", "27944"),
    ("camden", "27921"), ("currituck", "27929"), ("manteo", "27954"),
    ("kill devil hills", "27948"), ("nags head", "27959"), ("columbia", "27925"),
    ("swan quarter", "27885"), ("belhaven", "27810"), ("aurora", "27806"),
    ("chocowinity", "27817"), ("robersonville", "27871"), ("bethel", "27812"),
    ("conetoe", "27819"), ("pinetops", "27864"), ("spring hope", "27882"),
    ("bailey", "27807"), ("middlesex", "27557"), ("kenly", "27542"),
    ("pine level", "27568"), ("four oaks", "27524"), ("coats", "27521"),
    ("lillington", "27546"), ("broadway", "27505"), ("carthage", "28327"),
    ("vass", "28394"), ("cameron", "28326"), ("robbins", "27325"),
    ("troy", "27371"), ("biscoe", "27209"), ("candor", "27229"),
    ("mount gilead", "27306"), ("norwood", "28128"), ("oakboro", "28129"),
    ("locust", "28097"), ("midland", "28107"), ("mount pleasant", "28124"),
    ("china grove", "28023"), ("landis", "28088"), ("rockwell", "28138"),
    ("granite quarry", "28072"), ("spencer", "28159"), ("cleveland", "27013"),
    ("mocksville", "27028"), ("advance", "27006"), ("yadkinville", "27055"),
    ("boonville", "27011"), ("east bend", "27018"), ("jonesville", "28642"),
    ("troutman", "28166"), ("harmony", "28634"), ("olin", "28660"),
    ("catawba", "28609"), ("sherrills ford", "28673"), ("terrell", "28682"),
    ("polkton", "28135"), ("marshville", "28103"), ("peachland", "28133"),
    ("morven", "28119"), ("lilesville", "28091"), ("rockingham", "28379"),
    ("hamlet", "28345"), ("ellerbe", "28338"), ("hoffman", "28347"),
    ("maxton", "28364"), ("rowland", "28383"), ("fairmont", "28340"),
    ("pembroke", "28372"), ("saint pauls", "28384"), ("lumber bridge", "28357"),
    ("parkton", "28371"), ("rennert", "28382"), ("bladenboro", "28320"),
    ("clarkton", "28433"), ("tar heel", "28392"), ("white lake", "28337"),
    ("garland", "28441"), ("roseboro", "28382"), ("salemburg", "28385"),
    ("autryville", "28318"), ("stedman", "28391"), ("wade", "28395"),
    ("godwin", "28344"), ("falcon", "28342"), ("linden", "28356"),
    ("bunnlevel", "28323"), ("mamers", "27552"), ("olivia", "28368"),
)

def _phonetically_distinct(names):
    """Keep the highest-ranked name per Soundex class.

    A population drawn from these tables then never holds two entities
    whose names differ but collide in blocking, mirroring how unlikely
    such confusable pairs are in a desk-scale sample of a real roll of
    millions.
    """
    from .blocking import soundex

    kept, seen = [], set()
    for name in names:
        code = soundex(name)
        if code not in seen:
            seen.add(code)
            kept.append(name)
    return tuple(kept)


GIVEN_NAMES = tuple(
    (name, max(1, round(1000 / (rank + 1))))
    for rank, name in enumerate(_phonetically_distinct(_GIVEN_RANKED))
)

SURNAMES = tuple(
    (name, max(1, round(1500 / (rank + 1))))
    for rank, name in enumerate(_phonetically_distinct(_SURNAME_RANKED))
)

CITIES = tuple(
    (city, zipcode, max(1, round(900 / (rank + 1))))
    for rank, (city, zipcode) in enumerate(_CITY_RANKED)
)
